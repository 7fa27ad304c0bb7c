from dataclasses import dataclass, field, fields
from typing import Dict, Iterable, List

import numpy as np

from qevo.evolution.population import Candidate, ranked

__all__ = ["History"]


@dataclass
class History:
    """Per-generation record of an evolution run.

    Each series holds one value per evaluated generation, the initial
    population included.

    Histories concatenate, so a run can be extended and its records kept
    together:

        >>> history = evolver.run(50)
        >>> history += evolver.run(100)

    Attributes
    ----------
    best_composite
        Composite score of the best candidate.
    best_fidelity
        Highest fidelity to the target in the population.
    mean_depth
        Mean genome length.
    best_depth
        Genome length of the best candidate.

    """

    best_composite: List[float] = field(default_factory=list)
    best_fidelity: List[float] = field(default_factory=list)
    mean_depth: List[float] = field(default_factory=list)
    best_depth: List[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.best_composite)

    def record(self, population: Iterable[Candidate]) -> "History":
        """Append the statistics of an evaluated generation."""
        candidates = list(population)
        best = candidates[ranked(candidates)[0]]
        self.best_composite.append(best.composite)
        self.best_fidelity.append(max(c.report.fidelity for c in candidates))
        self.mean_depth.append(float(np.mean([c.depth for c in candidates])))
        self.best_depth.append(best.depth)
        return self

    def as_dict(self) -> Dict[str, List]:
        return {f.name: list(getattr(self, f.name)) for f in fields(self)}

    def __iadd__(self, other: "History") -> "History":
        for f in fields(self):
            getattr(self, f.name).extend(getattr(other, f.name))
        return self

    def __add__(self, other: "History") -> "History":
        history = History(**self.as_dict())
        history += other
        return history
