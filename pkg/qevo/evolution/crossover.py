"""Single-point crossover of variable-length genomes."""
import logging
from typing import List, Tuple

import numpy as np

from qevo.core.circuit import Circuit, Operation
from qevo.errors import InvalidInput, TooShort
from qevo.evolution.population import Candidate, random_operation

__all__ = ["clamp_depth", "single_point_crossover"]

logger = logging.getLogger(__name__)


def clamp_depth(
    circuit: Circuit, min_depth: int, max_depth: int, rng: np.random.Generator
) -> Circuit:
    """Delete or insert uniformly random operations until the length is legal."""
    ops: List[Operation] = list(circuit.ops)
    while len(ops) > max_depth:
        del ops[int(rng.integers(len(ops)))]
    while len(ops) < min_depth:
        ops.insert(
            int(rng.integers(len(ops) + 1)), random_operation(circuit.n_qubits, rng)
        )
    return circuit.replace_ops(ops)


def single_point_crossover(
    a: Candidate,
    b: Candidate,
    rng: np.random.Generator,
    min_depth: int,
    max_depth: int,
) -> Tuple[Candidate, Candidate]:
    """Exchange the tails of two genomes cut at independent points.

    With cuts i in [1, len(a) - 1] and j in [1, len(b) - 1] the children are
    a[:i] + b[j:] and b[:j] + a[i:], then clamped to [min_depth, max_depth].
    Identical parents produce copies of themselves.

    Raises
    ------
    TooShort
        When a parent has fewer than two operations and cannot be cut.

    """
    if a.circuit.n_qubits != b.circuit.n_qubits:
        raise InvalidInput("Cannot cross genomes acting on different qubit counts.")
    if len(a.circuit) < 2 or len(b.circuit) < 2:
        raise TooShort(
            f"Crossover needs parents of length >= 2, got {len(a.circuit)} and"
            f" {len(b.circuit)}."
        )
    if a.circuit == b.circuit:
        return Candidate(a.circuit), Candidate(b.circuit)

    i = int(rng.integers(1, len(a.circuit)))
    j = int(rng.integers(1, len(b.circuit)))
    first = a.circuit.replace_ops(a.circuit.ops[:i] + b.circuit.ops[j:])
    second = b.circuit.replace_ops(b.circuit.ops[:j] + a.circuit.ops[i:])

    children = []
    for child in (first, second):
        if not min_depth <= len(child) <= max_depth:
            logger.debug(
                "crossover: clamping a child of length %d to [%d, %d]",
                len(child),
                min_depth,
                max_depth,
            )
            child = clamp_depth(child, min_depth, max_depth, rng)
        children.append(Candidate(child))
    return children[0], children[1]
