"""Tournament selection of parents and elites."""
from typing import List, Sequence

import numpy as np

from qevo.errors import InvalidInput, Unevaluated
from qevo.evolution.population import Candidate, Population, ranking_key

__all__ = ["select_elites", "tournament_select"]


def _tournament(
    candidates: Sequence[Candidate],
    indices: Sequence[int],
    k: int,
    rng: np.random.Generator,
) -> int:
    entrants = rng.choice(len(indices), size=k, replace=False)
    sampled = [indices[int(e)] for e in entrants]
    for i in sampled:
        if not candidates[i].is_evaluated:
            raise Unevaluated(f"Candidate {i} entered a tournament without a fitness report.")
    return max(sampled, key=lambda i: ranking_key(candidates, i))


def tournament_select(pop: Population, k: int, rng: np.random.Generator) -> Candidate:
    """Best of `k` candidates drawn uniformly without replacement.

    The winner has the highest composite; ties go to the shorter genome and
    then to the earlier index.
    """
    size = len(pop.candidates)
    if not 1 <= k <= size:
        raise InvalidInput(f"Tournament size must be in [1, {size}], got {k}.")
    winner = _tournament(pop.candidates, range(size), k, rng)
    return pop.candidates[winner]


def select_elites(
    pop: Population, count: int, k: int, rng: np.random.Generator
) -> List[Candidate]:
    """Run `count` tournaments, removing each winner from later tournaments.

    With `k` equal to the population size this picks the top `count`
    candidates.
    """
    remaining = list(range(len(pop.candidates)))
    elites: List[Candidate] = []
    for _ in range(count):
        winner = _tournament(pop.candidates, remaining, min(k, len(remaining)), rng)
        remaining.remove(winner)
        elites.append(pop.candidates[winner])
    return elites
