import pytest

from qevo.core.circuit import Circuit, op
from qevo.evolution.population import Candidate
from qevo.fitness import FitnessReport
from qevo.history import History


def candidate(depth, fidelity, composite):
    return Candidate(
        Circuit(1, [op("H", 0)] * depth), FitnessReport(fidelity, 0.0, 0.0, composite)
    )


def test_record():
    history = History().record(
        [candidate(4, 0.9, 0.5), candidate(2, 0.6, 0.55), candidate(6, 0.3, 0.1)]
    )
    assert history.best_composite == [0.55]
    assert history.best_fidelity == [0.9]
    assert history.best_depth == [2]
    assert history.mean_depth == [pytest.approx(4.0)]
    assert len(history) == 1


def test_histories_concatenate():
    first = History().record([candidate(3, 0.5, 0.4)])
    second = History().record([candidate(2, 0.7, 0.6)]).record([candidate(2, 0.8, 0.7)])

    combined = first + second
    assert len(combined) == 3
    assert combined.best_composite == [0.4, 0.6, 0.7]
    assert len(first) == 1

    first += second
    assert first.as_dict() == combined.as_dict()


def test_as_dict_copies_the_series():
    history = History().record([candidate(3, 0.5, 0.4)])
    data = history.as_dict()
    data["best_composite"].append(1.0)
    assert history.best_composite == [0.4]
    assert set(data) == {"best_composite", "best_fidelity", "mean_depth", "best_depth"}
