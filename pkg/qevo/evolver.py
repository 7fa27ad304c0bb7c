"""Evolve a population of circuits toward a target state."""
import logging
import time
from typing import Dict, Iterator, Optional

import jax
from tqdm import tqdm

from qevo.core.simulator import DEFAULT_QUBIT_LIMIT
from qevo.core.states import TargetState
from qevo.errors import TrialTimeout
from qevo.evaluation import EvalMode, evaluate_population, select_eval_mode
from qevo.evolution.generation import EvolutionConfig
from qevo.evolution.population import Candidate, Population, ranked
from qevo.fitness import FitnessWeights
from qevo.history import History
from qevo.islands import (
    Archipelago,
    IslandConfig,
    init_archipelago,
    island_sizes,
    step_archipelago,
)

__all__ = ["evolver"]

logger = logging.getLogger(__name__)


class evolver(object):
    """Generational runtime of the genetic algorithm.

    The runtime keeps track of the current population, so a run can be
    extended after it returned:

        >>> history = evolver.run(50)
        ... history += evolver.run(100)

    It can also be iterated over, one generation at a time, which lets the
    caller stop on its own criterion or inspect intermediate populations:

        >>> for population in evolver:
        ...     print(population.generation, population.best().report)

    The iteration ends at the generation cap or once a candidate reaches
    the stopping fidelity.

    The initial population is evaluated during the warmup. When the
    evaluation mode is `auto`, the warmup also times the concrete modes on
    that population and keeps the fastest for the rest of the run.

    """

    def __init__(
        self,
        rng_key: jax.Array,
        target: TargetState,
        evo_cfg: EvolutionConfig,
        weights: FitnessWeights = FitnessWeights(),
        d_max: Optional[int] = None,
        island_cfg: Optional[IslandConfig] = None,
        mode: EvalMode = EvalMode.AUTO,
        workers: Optional[int] = None,
        optimize_each_eval: bool = False,
        qubit_limit: int = DEFAULT_QUBIT_LIMIT,
        progress_bar: bool = True,
        deadline: Optional[float] = None,
    ):
        """Initialize the evolution runtime.

        Parameters
        ----------
        rng_key
            The key passed to JAX's random number generator. The runtime is
            in charge of splitting the key as it is being used.
        target
            The state the circuits should prepare.
        evo_cfg
            Configuration of the whole population; with islands, it is
            shared between them, see `qevo.islands.island_sizes`.
        weights, d_max
            Fitness weights and the depth that normalizes the penalties.
            `d_max` defaults to the maximum genome depth.
        island_cfg
            Enables the island model when given.
        mode
            Evaluation mode; `auto` is resolved during the warmup.
        deadline
            Value of `time.monotonic()` after which the run raises
            `TrialTimeout`.

        """
        evo_cfg = evo_cfg.validate()
        weights = weights.validate()
        count = 1
        if island_cfg is not None:
            island_cfg = island_cfg.validate(evo_cfg.population_size)
            count = island_cfg.count

        logger.info(
            "evolver: initialize %d island(s) of %s candidate(s) on %d qubit(s)",
            count,
            "/".join(str(s) for s in island_sizes(evo_cfg.population_size, count)),
            target.n_qubits,
        )
        self.arch: Archipelago = init_archipelago(
            evo_cfg, count, target.n_qubits, rng_key, qubit_limit
        )

        self.target = target
        self.evo_cfg = evo_cfg
        self.island_cfg = island_cfg or IslandConfig(count=1)
        self.weights = weights
        self.d_max = d_max or evo_cfg.max_depth
        self.mode = EvalMode(mode)
        self.workers = workers
        self.optimize_each_eval = optimize_each_eval
        self.qubit_limit = qubit_limit
        self.progress_bar = progress_bar
        self.deadline = deadline

        self.timings: Dict[str, float] = {}
        self.is_warmed_up = False

    # ----------------------------------------------------------------
    #                         == STATE ==
    # ----------------------------------------------------------------

    @property
    def generation(self) -> int:
        return self.arch.generation

    @property
    def population(self) -> Population:
        """All islands gathered in one population."""
        return Population(self.arch.candidates(), self.generation)

    def best(self) -> Candidate:
        candidates = self.arch.candidates()
        return candidates[ranked(candidates)[0]]

    @property
    def best_fidelity(self) -> float:
        return max(c.report.fidelity for c in self.arch.candidates())

    @property
    def is_done(self) -> bool:
        return (
            self.generation >= self.evo_cfg.generations
            or self.best_fidelity >= self.evo_cfg.stop_fidelity
        )

    def evaluate(self, pop: Population) -> Population:
        return evaluate_population(
            pop,
            self.target,
            self.weights,
            self.mode,
            self.d_max,
            self.workers,
            self.optimize_each_eval,
            self.qubit_limit,
        )

    # ----------------------------------------------------------------
    #                         == RUNTIME ==
    # ----------------------------------------------------------------

    def warmup(self) -> History:
        """Evaluate the initial population, choosing the evaluation mode if needed.

        Returns
        -------
        A History holding the statistics of the initial population.

        """
        if self.mode is EvalMode.AUTO:
            logger.info("evolver: time the evaluation modes on the initial population")
            self.mode, self.timings = select_eval_mode(
                self.population,
                self.target,
                self.weights,
                self.d_max,
                self.workers,
                self.optimize_each_eval,
                self.qubit_limit,
            )
        logger.info("evolver: evaluation mode %s", self.mode)

        islands = tuple(self.evaluate(island) for island in self.arch.islands)
        self.arch = self.arch._replace(islands=islands)
        self.is_warmed_up = True
        return History().record(self.arch.candidates())

    def step(self) -> Population:
        """Advance the run by one generation."""
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise TrialTimeout(
                f"The run exceeded its time budget at generation {self.generation}."
            )
        self.arch = step_archipelago(
            self.arch,
            self.evo_cfg,
            self.island_cfg,
            self.target,
            self.evaluate,
            self.evo_cfg.generations,
            self.qubit_limit,
        )
        return self.population

    def __iter__(self) -> Iterator[Population]:
        if not self.is_warmed_up:
            self.warmup()
        return self

    def __next__(self) -> Population:
        if self.is_done:
            raise StopIteration
        return self.step()

    def run(self, num_generations: Optional[int] = None) -> History:
        """Run the evolution.

        The initial population is evaluated first if the runtime has not
        been warmed up, and its statistics open the returned history. The
        run stops early once a candidate reaches the stopping fidelity.

        Parameters
        ----------
        num_generations
            The number of generations to run; by default, up to the
            configured generation cap.

        Returns
        -------
        The per-generation History of the generations this call evaluated.

        """
        history = History() if self.is_warmed_up else self.warmup()
        if num_generations is None:
            num_generations = max(self.evo_cfg.generations - self.generation, 0)

        with tqdm(
            total=num_generations, disable=not self.progress_bar, desc="generations"
        ) as progress:
            for _ in range(num_generations):
                if self.best_fidelity >= self.evo_cfg.stop_fidelity:
                    logger.info(
                        "evolver: stopping fidelity reached at generation %d",
                        self.generation,
                    )
                    break
                self.step()
                history.record(self.arch.candidates())
                progress.set_postfix(best=f"{history.best_composite[-1]:.4f}")
                progress.update(1)

        return history
