"""Candidates, populations and random genomes."""
import logging
from typing import TYPE_CHECKING, List, NamedTuple, Optional, Tuple

import numpy as np

from qevo.core.circuit import Circuit, Operation
from qevo.core.gates import CNOT_INDEX, SINGLE_QUBIT_GATES, GateId
from qevo.core.simulator import DEFAULT_QUBIT_LIMIT, simulate_batch
from qevo.errors import GenerationStalled, Unevaluated
from qevo.fitness import FitnessReport
from qevo.jax import generator

if TYPE_CHECKING:
    from qevo.evolution.generation import EvolutionConfig

__all__ = [
    "Candidate",
    "Population",
    "init_population",
    "is_trivial",
    "random_candidates",
    "random_circuit",
    "random_operation",
    "ranking_key",
]

logger = logging.getLogger(__name__)

TRIVIAL_FIDELITY = 1 - 1e-9
REDRAWS_PER_CANDIDATE = 100


class Candidate(NamedTuple):
    circuit: Circuit
    report: Optional[FitnessReport] = None

    @property
    def depth(self) -> int:
        return len(self.circuit)

    @property
    def is_evaluated(self) -> bool:
        return self.report is not None

    @property
    def composite(self) -> float:
        if self.report is None:
            raise Unevaluated("The candidate has no fitness report.")
        return self.report.composite

    def with_circuit(self, circuit: Circuit) -> "Candidate":
        """A new, unevaluated candidate."""
        return Candidate(circuit)


class Population(NamedTuple):
    candidates: Tuple[Candidate, ...]
    generation: int = 0

    @property
    def size(self) -> int:
        return len(self.candidates)

    @property
    def is_evaluated(self) -> bool:
        return all(c.is_evaluated for c in self.candidates)

    def best(self) -> Candidate:
        """Highest composite; ties go to the shorter genome, then the earlier index."""
        return self.candidates[ranked(self.candidates)[0]]


def ranking_key(candidates, index: int):
    candidate = candidates[index]
    return (candidate.composite, -candidate.depth, -index)


def ranked(candidates) -> List[int]:
    """Candidate indices from best to worst."""
    return sorted(
        range(len(candidates)),
        key=lambda i: ranking_key(candidates, i),
        reverse=True,
    )


# --------------------------------------------------------------------
#                     == RANDOM GENOMES ==
# --------------------------------------------------------------------


def random_operation(n_qubits: int, rng: np.random.Generator) -> Operation:
    """Draw a gate uniformly, then its wires uniformly among the valid ones.

    CNOT needs two distinct wires and is not drawn on a single qubit.
    """
    pool = tuple(GateId) if n_qubits >= 2 else SINGLE_QUBIT_GATES
    gate = pool[int(rng.integers(len(pool)))]
    if gate.position != CNOT_INDEX:
        return Operation(gate, (int(rng.integers(n_qubits)),))

    control = int(rng.integers(n_qubits))
    target = int(rng.integers(n_qubits - 1))
    if target >= control:
        target += 1
    return Operation(gate, (control, target))


def random_circuit(
    n_qubits: int, min_depth: int, max_depth: int, rng: np.random.Generator
) -> Circuit:
    length = int(rng.integers(min_depth, max_depth + 1))
    return Circuit(n_qubits, tuple(random_operation(n_qubits, rng) for _ in range(length)))


def is_trivial(circuit: Circuit, qubit_limit: int = DEFAULT_QUBIT_LIMIT) -> bool:
    """Whether the genome prepares |0...0> up to a phase or never entangles."""
    if circuit.n_qubits >= 2 and not any(o.gate is GateId.CNOT for o in circuit):
        return True
    state = np.asarray(simulate_batch([circuit], qubit_limit)[0])
    return bool(np.abs(state[0]) ** 2 > TRIVIAL_FIDELITY)


def random_candidates(
    count: int,
    n_qubits: int,
    min_depth: int,
    max_depth: int,
    rng: np.random.Generator,
    qubit_limit: int = DEFAULT_QUBIT_LIMIT,
) -> List[Candidate]:
    """Draw `count` nontrivial candidates, redrawing trivial ones."""
    candidates: List[Candidate] = []
    max_draws = REDRAWS_PER_CANDIDATE * max(count, 1)
    draws = 0
    while len(candidates) < count:
        if draws >= max_draws:
            raise GenerationStalled(
                f"Only {len(candidates)} of {count} nontrivial candidates after"
                f" {draws} draws on {n_qubits} qubit(s), depth {min_depth}..{max_depth}."
            )
        draws += 1
        circuit = random_circuit(n_qubits, min_depth, max_depth, rng)
        if not is_trivial(circuit, qubit_limit):
            candidates.append(Candidate(circuit))

    if draws > count:
        logger.debug("population: rejected %d trivial genome(s)", draws - count)
    return candidates


def init_population(
    cfg: "EvolutionConfig",
    n_qubits: int,
    rng_key,
    qubit_limit: int = DEFAULT_QUBIT_LIMIT,
) -> Population:
    """Random initial population of unevaluated, nontrivial candidates."""
    rng = generator(rng_key)
    candidates = random_candidates(
        cfg.population_size, n_qubits, cfg.min_depth, cfg.max_depth, rng, qubit_limit
    )
    return Population(tuple(candidates), 0)
