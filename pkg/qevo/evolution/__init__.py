from qevo.evolution.adaptation import adaptive_rates, genome_distance, population_diversity
from qevo.evolution.crossover import single_point_crossover
from qevo.evolution.generation import EvolutionConfig, evolve_generation
from qevo.evolution.mutations import (
    MutationConfig,
    Strategy,
    all_strategy_sets,
    apply_mutations,
    mutate_add,
    mutate_change,
    mutate_delete,
    mutate_swap,
    parse_strategies,
    strategy_bitmask,
    strategy_label,
)
from qevo.evolution.population import Candidate, Population, init_population, is_trivial
from qevo.evolution.selection import select_elites, tournament_select

__all__ = [
    "Candidate",
    "EvolutionConfig",
    "MutationConfig",
    "Population",
    "Strategy",
    "adaptive_rates",
    "all_strategy_sets",
    "apply_mutations",
    "evolve_generation",
    "genome_distance",
    "init_population",
    "is_trivial",
    "mutate_add",
    "mutate_change",
    "mutate_delete",
    "mutate_swap",
    "parse_strategies",
    "population_diversity",
    "select_elites",
    "single_point_crossover",
    "strategy_bitmask",
    "strategy_label",
    "tournament_select",
]
