"""The four mutation strategies and their combinations.

Every strategy maps a candidate to a new, unevaluated candidate:

- *change* substitutes one operation with another of the same arity on the
  same wires. Single-qubit gates pick one of the seven other single-qubit
  gates; CNOT, the only two-qubit gate, swaps its control and target.
- *delete* removes one operation.
- *add* inserts a fresh random operation at a random position.
- *swap* exchanges two operations.

The depth guards (delete at `min_depth`, add at `max_depth`, swap on a
genome shorter than two) leave the candidate unchanged.

"""
import logging
from enum import Enum
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Tuple

import numpy as np

from qevo.core.circuit import Operation
from qevo.core.gates import SINGLE_QUBIT_GATES, GateId
from qevo.errors import InvalidInput
from qevo.evolution.population import Candidate, random_operation

__all__ = [
    "MutationConfig",
    "Strategy",
    "all_strategy_sets",
    "apply_mutations",
    "mutate_add",
    "mutate_change",
    "mutate_delete",
    "mutate_swap",
    "parse_strategies",
    "strategy_bitmask",
    "strategy_label",
]

logger = logging.getLogger(__name__)


class Strategy(str, Enum):
    CHANGE = "change"
    DELETE = "delete"
    ADD = "add"
    SWAP = "swap"

    @property
    def bit(self) -> int:
        return 1 << list(Strategy).index(self)

    def __str__(self) -> str:
        return self.value


ALL_STRATEGIES: Tuple[Strategy, ...] = tuple(Strategy)


def strategy_bitmask(strategies: Iterable[Strategy]) -> int:
    mask = 0
    for strategy in strategies:
        mask |= Strategy(strategy).bit
    return mask


def canonical(strategies: Iterable[Strategy]) -> Tuple[Strategy, ...]:
    """Deduplicated strategies in declaration order."""
    mask = strategy_bitmask(strategies)
    return tuple(s for s in Strategy if mask & s.bit)


def strategy_label(strategies: Iterable[Strategy]) -> str:
    return "+".join(s.value for s in canonical(strategies))


def all_strategy_sets() -> List[Tuple[Strategy, ...]]:
    """The 15 non-empty strategy sets, ordered by bitmask."""
    return [
        tuple(s for s in Strategy if mask & s.bit)
        for mask in range(1, 2 ** len(Strategy))
    ]


def parse_strategies(text: str) -> Tuple[Strategy, ...]:
    """Parse `"swap,delete"` or `"swap+delete"` into a canonical strategy set."""
    names = [n.strip() for n in text.replace("+", ",").split(",") if n.strip()]
    if not names:
        raise InvalidInput("A strategy set needs at least one strategy.")
    try:
        return canonical(Strategy(n.lower()) for n in names)
    except ValueError as e:
        raise InvalidInput(
            f"{e}; strategies are {', '.join(s.value for s in Strategy)}."
        ) from e


class MutationConfig(NamedTuple):
    strategies: Tuple[Strategy, ...] = ALL_STRATEGIES
    rate: float = 0.25
    mutations_per_candidate: int = 1
    adaptive: bool = False
    alpha: float = 0.5
    beta: float = 0.3

    def validate(self) -> "MutationConfig":
        if not self.strategies:
            raise InvalidInput("At least one mutation strategy must be enabled.")
        if not 0.0 <= self.rate <= 1.0:
            raise InvalidInput(f"The mutation rate must be in [0, 1], got {self.rate}.")
        if self.mutations_per_candidate < 1:
            raise InvalidInput("mutations_per_candidate must be at least 1.")
        return self


def _replace(candidate: Candidate, ops: List[Operation]) -> Candidate:
    return candidate.with_circuit(candidate.circuit.replace_ops(ops))


def mutate_change(candidate: Candidate, rng: np.random.Generator) -> Candidate:
    ops = list(candidate.circuit.ops)
    if not ops:
        raise InvalidInput("Cannot change an operation of an empty genome.")
    position = int(rng.integers(len(ops)))
    gate, wires = ops[position]
    if gate is GateId.CNOT:
        ops[position] = Operation(gate, (wires[1], wires[0]))
    else:
        others = [g for g in SINGLE_QUBIT_GATES if g is not gate]
        ops[position] = Operation(others[int(rng.integers(len(others)))], wires)
    return _replace(candidate, ops)


def mutate_delete(
    candidate: Candidate, rng: np.random.Generator, min_depth: int
) -> Candidate:
    ops = list(candidate.circuit.ops)
    if len(ops) <= min_depth:
        logger.debug("mutations: delete skipped at the minimum depth %d", min_depth)
        return candidate
    del ops[int(rng.integers(len(ops)))]
    return _replace(candidate, ops)


def mutate_add(candidate: Candidate, rng: np.random.Generator, max_depth: int) -> Candidate:
    ops = list(candidate.circuit.ops)
    if len(ops) >= max_depth:
        logger.debug("mutations: add skipped at the maximum depth %d", max_depth)
        return candidate
    position = int(rng.integers(len(ops) + 1))
    ops.insert(position, random_operation(candidate.circuit.n_qubits, rng))
    return _replace(candidate, ops)


def mutate_swap(candidate: Candidate, rng: np.random.Generator) -> Candidate:
    ops = list(candidate.circuit.ops)
    if len(ops) < 2:
        logger.debug("mutations: swap skipped on a genome of length %d", len(ops))
        return candidate
    i, j = (int(p) for p in rng.choice(len(ops), size=2, replace=False))
    ops[i], ops[j] = ops[j], ops[i]
    return _replace(candidate, ops)


Mutation = Callable[[Candidate, np.random.Generator, int, int], Candidate]

MUTATIONS: Dict[Strategy, Mutation] = {
    Strategy.CHANGE: lambda c, rng, lo, hi: mutate_change(c, rng),
    Strategy.DELETE: lambda c, rng, lo, hi: mutate_delete(c, rng, lo),
    Strategy.ADD: lambda c, rng, lo, hi: mutate_add(c, rng, hi),
    Strategy.SWAP: lambda c, rng, lo, hi: mutate_swap(c, rng),
}


def apply_mutations(
    candidate: Candidate,
    mc: MutationConfig,
    rng: np.random.Generator,
    min_depth: int,
    max_depth: int,
    rate: Optional[float] = None,
) -> Candidate:
    """Mutate the candidate with probability `rate`.

    A mutated candidate goes through `mc.mutations_per_candidate` operators
    in sequence, each drawn uniformly from `mc.strategies`. The rate defaults
    to `mc.rate`; adaptive runs pass their effective rate.
    """
    rate = mc.rate if rate is None else rate
    if rng.random() >= rate:
        return candidate
    for _ in range(mc.mutations_per_candidate):
        strategy = mc.strategies[int(rng.integers(len(mc.strategies)))]
        candidate = MUTATIONS[strategy](candidate, rng, min_depth, max_depth)
    return candidate
