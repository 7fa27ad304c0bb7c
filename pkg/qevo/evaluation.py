"""Population evaluation.

Evaluating a candidate means simulating its genome, comparing the state to
the target and scoring the result. The three concrete modes only differ in
how simulations are scheduled:

- `serial_batch` simulates every pending genome in one compiled pass;
- `serial_single` simulates genomes one at a time;
- `parallel` splits the pending genomes into contiguous chunks of
  ceil(n / workers) and simulates the chunks on a thread pool.

All modes pad genomes to the same length and score states the same way, so
they produce the same fitness reports. `auto` is resolved once, on the
initial population, by `select_eval_mode`.

"""
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from qevo.core.circuit import Circuit, capacity_for, t_count
from qevo.core.simulator import DEFAULT_QUBIT_LIMIT, simulate_batch
from qevo.core.states import TargetState
from qevo.errors import DimensionMismatch, EvalFailed, InvalidInput
from qevo.evolution.population import Candidate, Population
from qevo.fitness import FitnessReport, FitnessWeights, fidelities, fitness
from qevo.jax import wait_until_computed
from qevo.optimizer import optimize

__all__ = [
    "EvalMode",
    "default_workers",
    "evaluate_candidates",
    "evaluate_population",
    "select_eval_mode",
]

logger = logging.getLogger(__name__)


class EvalMode(str, Enum):
    PARALLEL = "parallel"
    SERIAL_SINGLE = "serial_single"
    SERIAL_BATCH = "serial_batch"
    AUTO = "auto"

    def __str__(self) -> str:
        return self.value


# Order used to break timing ties, simplest first.
CONCRETE_MODES = (EvalMode.SERIAL_BATCH, EvalMode.SERIAL_SINGLE, EvalMode.PARALLEL)


def default_workers() -> int:
    return os.cpu_count() or 1


# --------------------------------------------------------------------
#                     == SCHEDULING ==
# --------------------------------------------------------------------


def _simulate_serial_single(circuits, capacity, qubit_limit) -> np.ndarray:
    return np.stack(
        [np.asarray(simulate_batch([c], qubit_limit, capacity)[0]) for c in circuits]
    )


def _simulate_serial_batch(circuits, capacity, qubit_limit) -> np.ndarray:
    return np.asarray(simulate_batch(circuits, qubit_limit, capacity))


def _retry_chunk(chunk, start, capacity, qubit_limit) -> np.ndarray:
    """Simulate a failed chunk once more, genome by genome, to locate a failure."""
    states = []
    for offset, circuit in enumerate(chunk):
        try:
            states.append(np.asarray(simulate_batch([circuit], qubit_limit, capacity)[0]))
        except Exception as e:
            raise EvalFailed(start + offset, e) from e
    return np.stack(states)


def _simulate_parallel(circuits, capacity, qubit_limit, workers) -> np.ndarray:
    chunk_size = math.ceil(len(circuits) / workers)
    starts = list(range(0, len(circuits), chunk_size))
    chunks = [circuits[s : s + chunk_size] for s in starts]

    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = [
            executor.submit(_simulate_serial_batch, chunk, capacity, qubit_limit)
            for chunk in chunks
        ]
        results = []
        for start, chunk, future in zip(starts, chunks, futures):
            try:
                results.append(future.result())
            except Exception as e:
                logger.warning(
                    "evaluation: chunk starting at candidate %d failed (%r), retrying",
                    start,
                    e,
                )
                results.append(_retry_chunk(chunk, start, capacity, qubit_limit))
    return np.concatenate(results)


def _simulate(
    circuits: Sequence[Circuit],
    mode: EvalMode,
    capacity: int,
    workers: int,
    qubit_limit: int,
) -> np.ndarray:
    if mode is EvalMode.SERIAL_BATCH:
        return _simulate_serial_batch(circuits, capacity, qubit_limit)
    if mode is EvalMode.SERIAL_SINGLE:
        return _simulate_serial_single(circuits, capacity, qubit_limit)
    if mode is EvalMode.PARALLEL:
        return _simulate_parallel(circuits, capacity, qubit_limit, workers)
    raise InvalidInput(f"Evaluation mode '{mode}' must be resolved before evaluating.")


# --------------------------------------------------------------------
#                     == EVALUATION ==
# --------------------------------------------------------------------


def evaluate_candidates(
    candidates: Sequence[Candidate],
    target: TargetState,
    weights: FitnessWeights,
    mode: EvalMode,
    d_max: int,
    workers: Optional[int] = None,
    optimize_each_eval: bool = False,
    qubit_limit: int = DEFAULT_QUBIT_LIMIT,
) -> List[Candidate]:
    """Attach a fitness report to every candidate that lacks one.

    Candidates that already carry a report are returned as they are.
    With `optimize_each_eval` the depth and T-count are those of the
    optimized genome; the genome itself is kept unchanged.
    """
    mode = EvalMode(mode)
    pending = [i for i, c in enumerate(candidates) if c.report is None]
    if not pending:
        return list(candidates)

    circuits = [candidates[i].circuit for i in pending]
    for i, circuit in zip(pending, circuits):
        if circuit.n_qubits != target.n_qubits:
            raise DimensionMismatch(
                f"Candidate {i} acts on {circuit.n_qubits} qubit(s), the target on"
                f" {target.n_qubits}."
            )

    capacity = capacity_for(max(len(c) for c in circuits))
    workers = max(1, min(workers or default_workers(), len(circuits)))
    states = _simulate(circuits, mode, capacity, workers, qubit_limit)
    scores = fidelities(states, target.statevector)

    scored = [optimize(c) for c in circuits] if optimize_each_eval else circuits
    evaluated = list(candidates)
    for i, circuit, fidelity in zip(pending, scored, scores):
        report: FitnessReport = fitness(
            float(fidelity), len(circuit), t_count(circuit), weights, d_max
        )
        evaluated[i] = Candidate(candidates[i].circuit, report)
    return evaluated


def evaluate_population(
    pop: Population,
    target: TargetState,
    weights: FitnessWeights,
    mode: EvalMode,
    d_max: int,
    workers: Optional[int] = None,
    optimize_each_eval: bool = False,
    qubit_limit: int = DEFAULT_QUBIT_LIMIT,
) -> Population:
    candidates = evaluate_candidates(
        pop.candidates,
        target,
        weights,
        mode,
        d_max,
        workers,
        optimize_each_eval,
        qubit_limit,
    )
    return Population(tuple(candidates), pop.generation)


def select_eval_mode(
    pop: Population,
    target: TargetState,
    weights: FitnessWeights,
    d_max: int,
    workers: Optional[int] = None,
    optimize_each_eval: bool = False,
    qubit_limit: int = DEFAULT_QUBIT_LIMIT,
) -> Tuple[EvalMode, Dict[str, float]]:
    """Time every concrete mode on the population and pick the fastest.

    Each mode is run once untimed so that compilation is not measured,
    then timed on a second evaluation. The reports are discarded; ties go
    to the simplest mode.

    Returns
    -------
    The fastest mode and the measured wall time of each mode, in seconds.

    """
    unevaluated = Population(tuple(Candidate(c.circuit) for c in pop.candidates), pop.generation)

    timings: Dict[str, float] = {}
    for mode in CONCRETE_MODES:

        def evaluate():
            return evaluate_population(
                unevaluated,
                target,
                weights,
                mode,
                d_max,
                workers,
                optimize_each_eval,
                qubit_limit,
            )

        wait_until_computed(evaluate())
        start = time.perf_counter()
        wait_until_computed(evaluate())
        timings[mode.value] = time.perf_counter() - start

    chosen = min(CONCRETE_MODES, key=lambda m: (timings[m.value], CONCRETE_MODES.index(m)))
    logger.info(
        "evaluation: selected mode %s (%s)",
        chosen,
        ", ".join(f"{m}={t:.4f}s" for m, t in timings.items()),
    )
    return chosen, timings
