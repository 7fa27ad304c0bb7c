import warnings

import numpy as np
import pytest

from qevo.core.circuit import Circuit, op
from qevo.core.gates import SINGLE_QUBIT_GATES, GateId
from qevo.core.simulator import circuit_unitary, simulate
from qevo.errors import PassLimitExceeded
from qevo.optimizer import (
    DEFAULT_RULES,
    RewriteRule,
    optimize,
    rewrite_pass,
    verify_rule,
)


def random_genome(rng, n_qubits, length):
    gates = list(SINGLE_QUBIT_GATES) + [GateId.CNOT]
    ops = []
    for _ in range(length):
        gate = gates[rng.integers(len(gates))]
        if gate is GateId.CNOT:
            control, target = rng.choice(n_qubits, size=2, replace=False)
            ops.append(op(gate, control, target))
        else:
            ops.append(op(gate, rng.integers(n_qubits)))
    return Circuit(n_qubits, ops)


def assert_same_state(a, b):
    np.testing.assert_allclose(np.asarray(simulate(a)), np.asarray(simulate(b)), atol=1e-12)


#
# RULES
#


@pytest.mark.parametrize("rule", DEFAULT_RULES, ids=lambda r: r.name)
def test_default_rules_are_sound(rule):
    assert verify_rule(rule)


def test_unsound_rule_is_detected():
    assert not verify_rule(RewriteRule("T.T->Z", (GateId.T, GateId.T), (GateId.Z,)))
    assert not verify_rule(RewriteRule("H.CNOT->I", (GateId.H, GateId.CNOT), ()))


#
# EXAMPLES
#

expected_rewrites = [
    {"ops": [op("H", 0), op("H", 0)], "optimized": []},
    {"ops": [op("T", 0), op("T", 0)], "optimized": [op("S", 0)]},
    {"ops": [op("T", 1), op("Tdg", 1)], "optimized": []},
    {"ops": [op("T", 0)] * 4, "optimized": [op("Z", 0)]},
    {"ops": [op("S", 0), op("S", 0)], "optimized": [op("Z", 0)]},
    {"ops": [op("CNOT", 0, 1), op("CNOT", 0, 1)], "optimized": []},
    {
        "ops": [op("CNOT", 0, 1), op("CNOT", 1, 0)],
        "optimized": [op("CNOT", 0, 1), op("CNOT", 1, 0)],
    },
    {
        "ops": [op("H", 0), op("CNOT", 0, 1)],
        "optimized": [op("H", 0), op("CNOT", 0, 1)],
    },
    {
        "ops": [op("X", 0), op("X", 1), op("X", 0)],
        "optimized": [op("X", 1)],
    },
    {
        "ops": [op("X", 0), op("CNOT", 0, 1), op("X", 0)],
        "optimized": [op("X", 0), op("CNOT", 0, 1), op("X", 0)],
    },
    {
        "ops": [op("H", 0), op("S", 0), op("Sdg", 0), op("H", 0)],
        "optimized": [],
    },
]


@pytest.mark.parametrize("case", expected_rewrites)
def test_optimize(case):
    circuit = Circuit(2, case["ops"])
    assert optimize(circuit).ops == tuple(case["optimized"])


def test_a_cancellation_exposes_the_next_pair_in_the_same_pass():
    circuit = Circuit(1, [op("X", 0), op("X", 0), op("H", 0), op("H", 0)])
    rewritten, applied = rewrite_pass(circuit)
    assert applied == 2
    assert rewritten.ops == ()


def test_a_merge_moves_past_the_merged_gate():
    circuit = Circuit(1, [op("T", 0)] * 4)
    rewritten, applied = rewrite_pass(circuit)
    assert applied == 2
    assert rewritten.ops == (op("S", 0), op("S", 0))


def test_empty_circuit():
    assert optimize(Circuit(3)) == Circuit(3)


#
# PROPERTIES
#


@pytest.mark.parametrize("seed", range(5))
def test_optimize_preserves_the_state(seed):
    rng = np.random.default_rng(seed)
    for _ in range(20):
        circuit = random_genome(rng, int(rng.integers(2, 6)), int(rng.integers(0, 16)))
        optimized = optimize(circuit)
        assert len(optimized) <= len(circuit)
        assert_same_state(circuit, optimized)
        assert optimize(optimized) == optimized


@pytest.mark.slow
def test_optimize_preserves_the_unitary():
    rng = np.random.default_rng(1234)
    for _ in range(1000):
        circuit = random_genome(rng, int(rng.integers(2, 6)), int(rng.integers(0, 16)))
        optimized = optimize(circuit)
        np.testing.assert_allclose(
            circuit_unitary(optimized), circuit_unitary(circuit), atol=1e-12
        )


def test_pass_limit():
    circuit = Circuit(1, [op("T", 0)] * 4)
    with pytest.warns(PassLimitExceeded):
        partial = optimize(circuit, pass_limit=1)
    assert partial.ops == (op("S", 0), op("S", 0))

    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert optimize(circuit).ops == (op("Z", 0),)


def test_custom_rules():
    only_h = [rule for rule in DEFAULT_RULES if rule.pattern == (GateId.H, GateId.H)]
    circuit = Circuit(1, [op("T", 0), op("T", 0), op("H", 0), op("H", 0)])
    assert optimize(circuit, only_h).ops == (op("T", 0), op("T", 0))
