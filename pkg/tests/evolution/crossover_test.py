import numpy as np
import pytest

from qevo.core.circuit import Circuit, op
from qevo.errors import InvalidInput, TooShort
from qevo.evolution.crossover import clamp_depth, single_point_crossover
from qevo.evolution.population import Candidate, random_circuit
from qevo.fitness import FitnessReport


def genome(length, gate="H", n_qubits=3):
    return Candidate(
        Circuit(n_qubits, [op(gate, i % n_qubits) for i in range(length)]),
        FitnessReport(0.5, 0.0, 0.0, 0.5),
    )


def test_children_exchange_tails():
    a, b = genome(6, "H"), genome(10, "X")
    rng = np.random.default_rng(0)
    for _ in range(50):
        first, second = single_point_crossover(a, b, rng, 1, 100)
        assert len(first.circuit) + len(second.circuit) == 16
        i = sum(o.gate.value == "H" for o in first.circuit)
        assert 1 <= i <= 5
        assert first.circuit.ops[:i] == a.circuit.ops[:i]
        assert second.circuit.ops[-(6 - i):] == a.circuit.ops[i:]
        assert not first.is_evaluated and not second.is_evaluated


def test_identical_parents_produce_copies():
    a = genome(7)
    first, second = single_point_crossover(a, a, np.random.default_rng(0), 1, 20)
    assert first.circuit == a.circuit
    assert second.circuit == a.circuit
    assert first.report is None


def test_children_are_clamped():
    rng = np.random.default_rng(1)
    for _ in range(50):
        a = Candidate(random_circuit(3, 10, 10, rng))
        b = Candidate(random_circuit(3, 10, 10, rng))
        for child in single_point_crossover(a, b, rng, 8, 12):
            assert 8 <= len(child.circuit) <= 12


def test_crossover_is_deterministic():
    a, b = genome(6, "H"), genome(9, "T")
    first = single_point_crossover(a, b, np.random.default_rng(42), 1, 20)
    second = single_point_crossover(a, b, np.random.default_rng(42), 1, 20)
    assert first == second


class ScriptedRng:
    """Answers `integers` from a fixed script and records the requested ranges."""

    def __init__(self, *values):
        self.values = list(values)
        self.calls = []

    def integers(self, *args):
        self.calls.append(args)
        return self.values.pop(0)


MOTHER = Candidate(Circuit(3, [op("H", 0), op("X", 1), op("T", 2), op("S", 0)]))
FATHER = Candidate(Circuit(3, [op("CNOT", 0, 1), op("Z", 2), op("Y", 1)]))

golden_children = [
    {
        "script": (3, 1),
        "depth": (1, 10),
        "calls": [(1, 4), (1, 3)],
        "first": [op("H", 0), op("X", 1), op("T", 2), op("Z", 2), op("Y", 1)],
        "second": [op("CNOT", 0, 1), op("S", 0)],
    },
    {
        "script": (1, 2, 0, 3),
        "depth": (1, 3),
        "calls": [(1, 4), (1, 3), (5,), (4,)],
        "first": [op("H", 0), op("Y", 1)],
        "second": [op("Z", 2), op("X", 1), op("T", 2)],
    },
]


@pytest.mark.parametrize("case", golden_children)
def test_golden_children(case):
    rng = ScriptedRng(*case["script"])
    first, second = single_point_crossover(MOTHER, FATHER, rng, *case["depth"])
    assert rng.calls == case["calls"]
    assert not rng.values
    assert first.circuit == Circuit(3, case["first"])
    assert second.circuit == Circuit(3, case["second"])


@pytest.mark.parametrize("lengths", [(1, 5), (5, 1), (0, 0)])
def test_parents_must_be_cuttable(lengths):
    a, b = genome(lengths[0], "H"), genome(lengths[1], "X")
    with pytest.raises(TooShort):
        single_point_crossover(a, b, np.random.default_rng(0), 1, 20)


def test_parents_share_a_qubit_count():
    with pytest.raises(InvalidInput):
        single_point_crossover(
            genome(4, n_qubits=2), genome(4, n_qubits=3), np.random.default_rng(0), 1, 20
        )


clamp_cases = [
    {"length": 20, "bounds": (5, 15), "expected": 15},
    {"length": 2, "bounds": (5, 15), "expected": 5},
    {"length": 9, "bounds": (5, 15), "expected": 9},
]


@pytest.mark.parametrize("case", clamp_cases)
def test_clamp_depth(case):
    circuit = genome(case["length"]).circuit
    clamped = clamp_depth(circuit, *case["bounds"], np.random.default_rng(0))
    assert len(clamped) == case["expected"]
    assert clamped.n_qubits == circuit.n_qubits
