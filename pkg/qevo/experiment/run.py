"""A single evolution run on one target."""
import logging
import time
from typing import Dict, NamedTuple, Optional, Sequence, Tuple

import jax

from qevo.config import Config, override
from qevo.dataset import TargetRecord
from qevo.evaluation import EvalMode, evaluate_candidates
from qevo.evolution.mutations import Strategy, strategy_bitmask
from qevo.evolution.population import Candidate
from qevo.evolver import evolver
from qevo.fitness import FitnessReport
from qevo.history import History
from qevo.jax import fold_in_str
from qevo.optimizer import optimize

__all__ = ["RunResult", "run_key", "run_single"]

logger = logging.getLogger(__name__)


class RunResult(NamedTuple):
    target_id: str
    seed: int
    strategies: Tuple[Strategy, ...]
    best_candidate: Candidate
    history: History
    final_best: FitnessReport
    eval_mode: str
    eval_timings: Dict[str, float]
    wall_time: float

    @property
    def best_fitness_per_generation(self):
        return self.history.best_composite

    @property
    def generations(self) -> int:
        return len(self.history) - 1


def run_key(root_seed: int, target_id: str, seed: int, strategies: Sequence[Strategy]):
    """The stream of one run, derived from every coordinate that identifies it."""
    key = fold_in_str(jax.random.PRNGKey(root_seed), target_id)
    key = jax.random.fold_in(key, seed)
    return jax.random.fold_in(key, strategy_bitmask(strategies))


def run_single(
    target: TargetRecord,
    config: Config,
    seed: int,
    strategies: Optional[Sequence[Strategy]] = None,
    deadline: Optional[float] = None,
    progress_bar: Optional[bool] = None,
) -> RunResult:
    """Evolve a circuit toward `target` and optimize the best candidate.

    Parameters
    ----------
    target
        The dataset record to reproduce.
    config
        The full configuration; `run.seed` is the root seed of the stream.
    seed
        Seed index of the run within a study.
    strategies
        Overrides `evolutionary.strategies`.
    deadline
        Value of `time.monotonic()` after which the run raises
        `TrialTimeout`; defaults to `run.trial_timeout` from now.

    """
    if strategies is not None:
        config = override(
            config, {"evolutionary.strategies": [Strategy(s).value for s in strategies]}
        )
    strategies = tuple(config.evolutionary.strategies)
    root_seed = config.run.seed if config.run.seed is not None else 0
    if deadline is None:
        deadline = time.monotonic() + config.run.trial_timeout
    if progress_bar is None:
        progress_bar = config.run.progress_bar

    start = time.perf_counter()
    try:
        runtime = evolver(
            run_key(root_seed, target.id, seed, strategies),
            target.target,
            config.evolution_config(),
            config.weights(),
            config.d_max,
            config.island_config(),
            config.parallel.mode,
            config.workers,
            config.run.optimize_each_eval,
            config.run.qubit_limit,
            progress_bar,
            deadline,
        )
        history = runtime.run()

        best = runtime.best()
        if config.run.optimize_final:
            (best,) = evaluate_candidates(
                [Candidate(optimize(best.circuit))],
                target.target,
                config.weights(),
                EvalMode.SERIAL_BATCH,
                config.d_max,
                qubit_limit=config.run.qubit_limit,
            )
    except Exception as e:
        e.add_note(f"run: target {target.id}, seed {seed}, strategies {strategies}")
        raise

    wall_time = time.perf_counter() - start
    logger.info(
        "run: target %s seed %d finished after %d generation(s): fidelity %.6f,"
        " composite %.6f, depth %d",
        target.id,
        seed,
        len(history) - 1,
        best.report.fidelity,
        best.report.composite,
        best.depth,
    )
    return RunResult(
        target_id=target.id,
        seed=seed,
        strategies=strategies,
        best_candidate=best,
        history=history,
        final_best=best.report,
        eval_mode=str(runtime.mode),
        eval_timings=dict(runtime.timings),
        wall_time=wall_time,
    )
