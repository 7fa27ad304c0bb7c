"""Peephole simplification of Clifford+T genomes.

Each rule rewrites a pair of operations acting on the same wires. Two
operations form a pair when no operation between them touches any of their
wires: operations on disjoint wires commute, so they can be stepped over.

Cancellations remove both operations; merges replace them with a single
gate. Every rule strictly decreases the genome length, which guarantees
that `optimize` terminates; the pass limit is a backstop.

"""
import logging
import warnings
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from qevo.core.circuit import Circuit, Operation
from qevo.core.gates import GateId
from qevo.core.simulator import circuit_unitary
from qevo.errors import PassLimitExceeded

__all__ = [
    "DEFAULT_RULES",
    "RewriteRule",
    "optimize",
    "rewrite_pass",
    "verify_rule",
]

logger = logging.getLogger(__name__)

PASS_LIMIT = 50


class RewriteRule(NamedTuple):
    """Rewrite `pattern`, applied left to right on the same wires, into `replacement`."""

    name: str
    pattern: Tuple[GateId, GateId]
    replacement: Tuple[GateId, ...]


def _cancel(gate: GateId, inverse: Optional[GateId] = None) -> RewriteRule:
    inverse = inverse or gate
    return RewriteRule(f"{gate}.{inverse}->I", (gate, inverse), ())


def _merge(gate: GateId, into: GateId) -> RewriteRule:
    return RewriteRule(f"{gate}.{gate}->{into}", (gate, gate), (into,))


DEFAULT_RULES: Tuple[RewriteRule, ...] = (
    _cancel(GateId.X),
    _cancel(GateId.Y),
    _cancel(GateId.Z),
    _cancel(GateId.H),
    _cancel(GateId.CNOT),
    _cancel(GateId.S, GateId.Sdg),
    _cancel(GateId.Sdg, GateId.S),
    _cancel(GateId.T, GateId.Tdg),
    _cancel(GateId.Tdg, GateId.T),
    _merge(GateId.T, GateId.S),
    _merge(GateId.Tdg, GateId.Sdg),
    _merge(GateId.S, GateId.Z),
    _merge(GateId.Sdg, GateId.Z),
)


def verify_rule(rule: RewriteRule, tolerance: float = 1e-12) -> bool:
    """Check that a rule's pattern and replacement are the same unitary."""
    arity = rule.pattern[0].arity
    if any(g.arity != arity for g in rule.pattern + rule.replacement):
        return False
    wires = tuple(range(arity))
    pattern = Circuit(arity, [Operation(g, wires) for g in rule.pattern])
    replacement = Circuit(arity, [Operation(g, wires) for g in rule.replacement])
    difference = circuit_unitary(pattern) - circuit_unitary(replacement)
    return bool(np.max(np.abs(difference)) <= tolerance)


def _index_rules(rules: Sequence[RewriteRule]) -> Dict[Tuple[GateId, GateId], RewriteRule]:
    index: Dict[Tuple[GateId, GateId], RewriteRule] = {}
    for rule in rules:
        index.setdefault(rule.pattern, rule)
    return index


def _next_on_wires(ops: List[Operation], start: int) -> Optional[int]:
    wires = set(ops[start].wires)
    for j in range(start + 1, len(ops)):
        if wires.intersection(ops[j].wires):
            return j
    return None


def rewrite_pass(
    circuit: Circuit, rules: Sequence[RewriteRule] = DEFAULT_RULES
) -> Tuple[Circuit, int]:
    """One left-to-right sweep over the genome.

    Returns the rewritten circuit and the number of rules applied. After a
    cancellation the sweep resumes at the same position, which now holds the
    operation that followed the cancelled one.

    """
    index = _index_rules(rules)
    ops = list(circuit.ops)
    applied = 0
    i = 0
    while i < len(ops):
        j = _next_on_wires(ops, i)
        if j is None or ops[j].wires != ops[i].wires:
            i += 1
            continue
        rule = index.get((ops[i].gate, ops[j].gate))
        if rule is None:
            i += 1
            continue

        wires = ops[i].wires
        del ops[j]
        ops[i : i + 1] = [Operation(g, wires) for g in rule.replacement]
        applied += 1
        if rule.replacement:
            i += 1

    return circuit.replace_ops(ops), applied


def optimize(
    circuit: Circuit,
    rules: Sequence[RewriteRule] = DEFAULT_RULES,
    pass_limit: int = PASS_LIMIT,
) -> Circuit:
    """Apply rewrite passes until none applies.

    Warns with `PassLimitExceeded` and returns the last circuit if the
    fixpoint is not reached within `pass_limit` passes.
    """
    initial_depth = len(circuit)
    for passes in range(pass_limit):
        circuit, applied = rewrite_pass(circuit, rules)
        if applied == 0:
            logger.debug(
                "optimizer: depth %d -> %d in %d pass(es)",
                initial_depth,
                len(circuit),
                passes + 1,
            )
            return circuit

    warnings.warn(
        f"The optimizer did not reach a fixpoint after {pass_limit} passes; "
        "returning the last circuit.",
        PassLimitExceeded,
    )
    return circuit
