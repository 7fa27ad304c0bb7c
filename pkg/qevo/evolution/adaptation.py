"""Adaptive mutation rate.

The effective rate grows when the population loses diversity and decays as
the run approaches its generation cap:

    rate_eff = rate * (1 + alpha * (1 - diversity)) * (beta + (1 - beta) * (1 - gen / total_gens))

clamped to [0, 1]. At generation 0 with a fully diverse population the
configured rate is used unchanged; at the last generation it is scaled down
to `beta * rate`.

Diversity is the mean pairwise edit distance between genomes, normalized by
the longer genome of each pair, over a random sample of the population.
"""
import logging
from itertools import combinations
from typing import Sequence

import numpy as np

from qevo.core.circuit import Circuit
from qevo.errors import InvalidDiversity, InvalidInput
from qevo.evolution.mutations import MutationConfig
from qevo.evolution.population import Population

__all__ = [
    "adaptive_rates",
    "genome_distance",
    "population_diversity",
]

logger = logging.getLogger(__name__)


# --------------------------------------
#      == DIVERSITY ==
# --------------------------------------


def genome_distance(a: Circuit, b: Circuit) -> float:
    """Levenshtein distance on (gate, wires) tokens divided by the longer length."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 0.0

    previous = list(range(len(b) + 1))
    for i, op_a in enumerate(a.ops, start=1):
        current = [i] + [0] * len(b)
        for j, op_b in enumerate(b.ops, start=1):
            current[j] = min(
                previous[j] + 1,
                current[j - 1] + 1,
                previous[j - 1] + (op_a != op_b),
            )
        previous = current
    return previous[-1] / longest


def population_diversity(
    pop: Population, sample_size: int, rng: np.random.Generator
) -> float:
    """Mean pairwise genome distance over at most `sample_size` candidates."""
    size = len(pop.candidates)
    if size < 2:
        return 0.0
    chosen = rng.choice(size, size=min(sample_size, size), replace=False)
    circuits: Sequence[Circuit] = [pop.candidates[int(i)].circuit for i in sorted(chosen)]
    distances = [genome_distance(a, b) for a, b in combinations(circuits, 2)]
    return float(np.mean(distances)) if distances else 0.0


# --------------------------------------
#      == RATE SCHEDULE ==
# --------------------------------------


def adaptive_rates(
    mc: MutationConfig,
    avg_fitness: float,
    diversity: float,
    gen: int,
    total_gens: int,
) -> float:
    """Effective mutation rate of generation `gen`.

    `avg_fitness` is logged with the rate to follow the schedule in runs;
    the rate itself only depends on diversity and progress.
    """
    if not 0.0 <= diversity <= 1.0:
        raise InvalidDiversity(f"Diversity must be in [0, 1], got {diversity}.")
    if total_gens < 1:
        raise InvalidInput(f"total_gens must be at least 1, got {total_gens}.")

    progress = min(max(gen / total_gens, 0.0), 1.0)
    rate = (
        mc.rate
        * (1 + mc.alpha * (1 - diversity))
        * (mc.beta + (1 - mc.beta) * (1 - progress))
    )
    rate = min(max(rate, 0.0), 1.0)
    logger.debug(
        "adaptation: generation %d, diversity %.3f, mean fitness %.4f -> rate %.4f",
        gen,
        diversity,
        avg_fitness,
        rate,
    )
    return rate
