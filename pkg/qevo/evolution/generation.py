"""One generational step of the genetic algorithm.

The next population is made, in this order, of

1. `elite_count` elites chosen by tournament and copied unchanged, fitness
   report included;
2. offspring: tournament-selected parent pairs are crossed over and the
   children mutated, until the population is full;
3. `immigrant_count` fresh random candidates.

Each phase draws from its own stream split from the generation key, so the
draws of one phase do not depend on how many numbers another consumed.
"""
import logging
from typing import List, NamedTuple, Optional

import jax
import numpy as np

from qevo.core.simulator import DEFAULT_QUBIT_LIMIT
from qevo.core.states import TargetState
from qevo.errors import InvalidInput, TooShort, Unevaluated
from qevo.evolution.adaptation import adaptive_rates, population_diversity
from qevo.evolution.crossover import single_point_crossover
from qevo.evolution.mutations import MutationConfig, apply_mutations
from qevo.evolution.population import Candidate, Population, random_candidates
from qevo.evolution.selection import select_elites, tournament_select
from qevo.jax import generator

__all__ = ["EvolutionConfig", "effective_rate", "evolve_generation"]

logger = logging.getLogger(__name__)

PHASES = ("elites", "parents", "crossover", "mutation", "immigrants")


class EvolutionConfig(NamedTuple):
    population_size: int = 100
    elite_count: int = 2
    immigrant_count: int = 5
    tournament_k: int = 3
    min_depth: int = 5
    max_depth: int = 15
    mutation: MutationConfig = MutationConfig()
    generations: int = 150
    stop_fidelity: float = 0.99
    elite_tournament_k: Optional[int] = None
    diversity_sample: int = 20

    def validate(self) -> "EvolutionConfig":
        if self.elite_count < 0 or self.immigrant_count < 0:
            raise InvalidInput("Elite and immigrant counts are non-negative.")
        if self.elite_count + self.immigrant_count >= self.population_size:
            raise InvalidInput(
                f"elite_count + immigrant_count ({self.elite_count} +"
                f" {self.immigrant_count}) must be below the population size"
                f" {self.population_size}."
            )
        if not 1 <= self.tournament_k <= self.population_size:
            raise InvalidInput(
                f"tournament_k must be in [1, {self.population_size}],"
                f" got {self.tournament_k}."
            )
        if not 1 <= self.min_depth <= self.max_depth:
            raise InvalidInput(
                f"Depth bounds must satisfy 1 <= min_depth <= max_depth,"
                f" got {self.min_depth} and {self.max_depth}."
            )
        self.mutation.validate()
        return self

    @property
    def elite_k(self) -> int:
        k = self.elite_tournament_k or self.population_size
        return min(k, self.population_size)


def effective_rate(pop: Population, cfg: EvolutionConfig, rng: np.random.Generator) -> float:
    mc = cfg.mutation
    if not mc.adaptive:
        return mc.rate
    diversity = population_diversity(pop, cfg.diversity_sample, rng)
    avg_fitness = float(np.mean([c.composite for c in pop.candidates]))
    return adaptive_rates(mc, avg_fitness, diversity, pop.generation, cfg.generations)


def evolve_generation(
    pop: Population,
    cfg: EvolutionConfig,
    target: TargetState,
    rng_key,
    qubit_limit: int = DEFAULT_QUBIT_LIMIT,
) -> Population:
    """Build the next generation from an evaluated population.

    Elites keep their fitness report; offspring and immigrants are
    unevaluated.

    Raises
    ------
    Unevaluated
        If a candidate of `pop` has no fitness report.

    """
    for i, candidate in enumerate(pop.candidates):
        if not candidate.is_evaluated:
            raise Unevaluated(f"Candidate {i} of generation {pop.generation} is unevaluated.")

    rngs = dict(
        zip(PHASES, (generator(key) for key in jax.random.split(rng_key, len(PHASES))))
    )
    n_qubits = target.n_qubits
    size = cfg.population_size

    elites = select_elites(pop, cfg.elite_count, cfg.elite_k, rngs["elites"])

    rate = effective_rate(pop, cfg, rngs["mutation"])
    n_offspring = size - cfg.elite_count - cfg.immigrant_count
    offspring: List[Candidate] = []
    while len(offspring) < n_offspring:
        mother = tournament_select(pop, cfg.tournament_k, rngs["parents"])
        father = tournament_select(pop, cfg.tournament_k, rngs["parents"])
        child_rate = rate
        try:
            children = single_point_crossover(
                mother, father, rngs["crossover"], cfg.min_depth, cfg.max_depth
            )
        except TooShort:
            children = (Candidate(mother.circuit), Candidate(father.circuit))
            child_rate = 1.0
        for child in children:
            if len(offspring) == n_offspring:
                break
            offspring.append(
                apply_mutations(
                    child,
                    cfg.mutation,
                    rngs["mutation"],
                    cfg.min_depth,
                    cfg.max_depth,
                    child_rate,
                )
            )

    immigrants = random_candidates(
        cfg.immigrant_count,
        n_qubits,
        cfg.min_depth,
        cfg.max_depth,
        rngs["immigrants"],
        qubit_limit,
    )

    candidates = tuple(elites) + tuple(offspring) + tuple(immigrants)
    return Population(candidates, pop.generation + 1)
