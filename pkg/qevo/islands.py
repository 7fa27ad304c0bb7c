"""Island model.

The population is split into `count` islands that evolve independently,
each with its own stream. Islands hold `size // count` candidates; when the
count does not divide the size, the first islands take one more. Every
`migration_interval` generations, once `warmup_fraction` of the run has
elapsed, the islands exchange candidates along a ring: island i sends
copies of its `migration_count` best candidates to island i + 1, where they
replace the worst ones.

A single population is an archipelago of one island whose stream is the
root stream, so both code paths share the same draws.

"""
import logging
from typing import Callable, List, NamedTuple, Tuple

import jax

from qevo.core.simulator import DEFAULT_QUBIT_LIMIT
from qevo.core.states import TargetState
from qevo.errors import InvalidInput, NotWarm, Unevaluated
from qevo.evolution.generation import EvolutionConfig, evolve_generation
from qevo.evolution.population import Population, init_population, ranked

__all__ = [
    "Archipelago",
    "IslandConfig",
    "init_archipelago",
    "island_configs",
    "island_sizes",
    "migrate",
    "step_archipelago",
]

logger = logging.getLogger(__name__)

Evaluator = Callable[[Population], Population]


class IslandConfig(NamedTuple):
    count: int = 4
    migration_interval: int = 10
    migration_count: int = 2
    warmup_fraction: float = 0.5

    def validate(self, population_size: int) -> "IslandConfig":
        if self.count < 1 or self.migration_interval < 1 or self.migration_count < 1:
            raise InvalidInput(
                "Island count, migration interval and migration count are positive."
            )
        if not 0.0 <= self.warmup_fraction <= 1.0:
            raise InvalidInput(
                f"warmup_fraction must be in [0, 1], got {self.warmup_fraction}."
            )
        per_island = population_size // self.count
        if self.migration_count >= per_island:
            raise InvalidInput(
                f"migration_count ({self.migration_count}) must be below the island"
                f" size ({per_island})."
            )
        return self


class Archipelago(NamedTuple):
    """Islands in ring order, with the stream each island draws from next."""

    islands: Tuple[Population, ...]
    rng_keys: Tuple[jax.Array, ...]

    @property
    def generation(self) -> int:
        return self.islands[0].generation

    def candidates(self):
        return tuple(c for island in self.islands for c in island.candidates)


def island_sizes(population_size: int, count: int) -> Tuple[int, ...]:
    """Share the population between islands; the first ones take the remainder."""
    base, remainder = divmod(population_size, count)
    return tuple(base + (i < remainder) for i in range(count))


def island_configs(cfg: EvolutionConfig, count: int) -> Tuple[EvolutionConfig, ...]:
    """The evolution config of each island."""
    if count == 1:
        return (cfg,)
    return tuple(
        cfg._replace(population_size=size, tournament_k=min(cfg.tournament_k, size)).validate()
        for size in island_sizes(cfg.population_size, count)
    )


def island_keys(rng_key, count: int) -> Tuple[jax.Array, ...]:
    if count == 1:
        return (rng_key,)
    return tuple(jax.random.split(rng_key, count))


def init_archipelago(
    cfg: EvolutionConfig,
    count: int,
    n_qubits: int,
    rng_key,
    qubit_limit: int = DEFAULT_QUBIT_LIMIT,
) -> Archipelago:
    """Initial, unevaluated islands built from `cfg` split over `count` islands."""
    islands: List[Population] = []
    keys = []
    for key, island_cfg in zip(island_keys(rng_key, count), island_configs(cfg, count)):
        key, init_key = jax.random.split(key)
        islands.append(init_population(island_cfg, n_qubits, init_key, qubit_limit))
        keys.append(key)
    return Archipelago(tuple(islands), tuple(keys))


def migrate(
    arch: Archipelago, cfg: IslandConfig, generation: int, total_generations: int
) -> Archipelago:
    """Ring migration of copies of each island's best candidates.

    Every island's migrants are chosen before any island receives, so the
    result does not depend on the order islands are visited in.

    Raises
    ------
    NotWarm
        Before `warmup_fraction * total_generations` generations.
    Unevaluated
        If a candidate lacks a fitness report.

    """
    count = len(arch.islands)
    if count == 1:
        return arch
    if generation < cfg.warmup_fraction * total_generations:
        raise NotWarm(
            f"Migration starts at generation"
            f" {cfg.warmup_fraction * total_generations:g}, got {generation}."
        )
    for island in arch.islands:
        if not island.is_evaluated:
            raise Unevaluated("Migration requires evaluated islands.")

    m = cfg.migration_count
    orders = [ranked(island.candidates) for island in arch.islands]
    migrants = [
        [island.candidates[i] for i in order[:m]]
        for island, order in zip(arch.islands, orders)
    ]

    islands = []
    for receiver, (island, order) in enumerate(zip(arch.islands, orders)):
        candidates = list(island.candidates)
        incoming = migrants[(receiver - 1) % count]
        for slot, migrant in zip(order[::-1][:m], incoming):
            candidates[slot] = migrant
        islands.append(Population(tuple(candidates), island.generation))
    return arch._replace(islands=tuple(islands))


def step_archipelago(
    arch: Archipelago,
    evo_cfg: EvolutionConfig,
    island_cfg: IslandConfig,
    target: TargetState,
    evaluate: Evaluator,
    total_generations: int,
    qubit_limit: int = DEFAULT_QUBIT_LIMIT,
) -> Archipelago:
    """Advance every island one generation, then migrate when it is due.

    `evo_cfg` configures the whole population; each island evolves with its
    share, see `island_configs`.
    """
    islands = []
    keys = []
    configs = island_configs(evo_cfg, len(arch.islands))
    for island, key, cfg in zip(arch.islands, arch.rng_keys, configs):
        key, generation_key = jax.random.split(key)
        next_island = evolve_generation(island, cfg, target, generation_key, qubit_limit)
        islands.append(evaluate(next_island))
        keys.append(key)
    arch = Archipelago(tuple(islands), tuple(keys))

    generation = arch.generation
    if len(islands) > 1 and generation % island_cfg.migration_interval == 0:
        try:
            arch = migrate(arch, island_cfg, generation, total_generations)
            logger.debug("islands: migrated at generation %d", generation)
        except NotWarm:
            logger.debug("islands: no migration before warmup (generation %d)", generation)
    return arch
