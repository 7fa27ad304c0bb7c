import pytest

from qevo.config import Config, override
from qevo.core.circuit import Circuit, op
from qevo.dataset import DatasetSpec, generate_target
from qevo.evolution.mutations import Strategy
from qevo.evolution.population import Candidate
from qevo.experiment.run import RunResult
from qevo.fitness import FitnessReport
from qevo.history import History


@pytest.fixture(scope="session")
def dataset():
    spec = DatasetSpec(n_qubits=2, count=2, depth_min=2, depth_max=4, seed=5)
    return [generate_target(spec, index) for index in range(spec.count)]


@pytest.fixture
def config():
    return override(
        Config(),
        {
            "run.seed": 3,
            "run.progress_bar": False,
            "population.size": 12,
            "population.min_depth": 2,
            "population.max_depth": 6,
            "population.elite_count": 1,
            "population.immigrant_count": 2,
            "population.tournament_k": 2,
            "evolutionary.generations": 4,
            "parallel.mode": "serial_batch",
        },
    )


@pytest.fixture
def make_run():
    """Build a finished run by hand, without evolving anything."""

    def make(target_id, seed, composite, fidelity=None, strategies=(Strategy.SWAP,)):
        fidelity = composite if fidelity is None else fidelity
        report = FitnessReport(fidelity, 0.2, 0.0, composite)
        candidate = Candidate(Circuit(2, [op("H", 0), op("CNOT", 0, 1)]), report)
        history = History().record([candidate]).record([candidate])
        return RunResult(
            target_id=target_id,
            seed=seed,
            strategies=tuple(strategies),
            best_candidate=candidate,
            history=history,
            final_best=report,
            eval_mode="serial_batch",
            eval_timings={},
            wall_time=0.5,
        )

    return make
