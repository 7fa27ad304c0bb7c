# Must come first: enables 64-bit floats before any array is created.
from qevo import jax as _jax  # noqa: F401
from qevo.config import Config, load_config
from qevo.core import Circuit, GateId, Operation, TargetState, op, simulate
from qevo.dataset import DatasetSpec, TargetRecord, generate_dataset, load_dataset
from qevo.evaluation import EvalMode, evaluate_population, select_eval_mode
from qevo.evolution import EvolutionConfig, MutationConfig, Strategy
from qevo.evolver import evolver
from qevo.experiment import emit_report, hyperparameter_search, run_single, run_study
from qevo.fitness import FitnessWeights, fidelity_density, fidelity_pure, fitness
from qevo.history import History
from qevo.islands import IslandConfig
from qevo.optimizer import optimize

from . import core, evolution, experiment

__version__ = "0.1.0"

__all__ = [
    "core",
    "evolution",
    "experiment",
    "Circuit",
    "Config",
    "DatasetSpec",
    "EvalMode",
    "EvolutionConfig",
    "FitnessWeights",
    "GateId",
    "History",
    "IslandConfig",
    "MutationConfig",
    "Operation",
    "Strategy",
    "TargetRecord",
    "TargetState",
    "emit_report",
    "evaluate_population",
    "evolver",
    "fidelity_density",
    "fidelity_pure",
    "fitness",
    "generate_dataset",
    "hyperparameter_search",
    "load_config",
    "load_dataset",
    "op",
    "optimize",
    "run_single",
    "run_study",
    "select_eval_mode",
    "simulate",
]
