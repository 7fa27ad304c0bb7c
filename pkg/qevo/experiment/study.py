"""Strategy studies: every target, every seed, for several strategy sets.

The performance of a study is the mean, over the dataset's targets, of the
best final composite score reached on each target. Seeds are averaged
within a target first, so targets with more completed seeds do not weigh
more.

"""
import logging
import math
from collections import defaultdict
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from qevo.config import Config, override
from qevo.dataset import TargetRecord
from qevo.errors import EmptyStudy
from qevo.evolution.mutations import Strategy, canonical, strategy_bitmask, strategy_label
from qevo.experiment.run import RunResult, run_single

__all__ = [
    "Performance",
    "StudyResult",
    "performance_metric",
    "run_commands",
    "run_study",
    "summarize_runs",
]

logger = logging.getLogger(__name__)


class Performance(NamedTuple):
    mean: float
    median: float
    p25: float
    p75: float
    stddev: float
    run_stddev: float


class StudyResult(NamedTuple):
    strategies: Tuple[Strategy, ...]
    config: Config
    runs: Tuple[RunResult, ...]
    performance: float
    median: float
    p25: float
    p75: float
    stddev: float
    run_stddev: float

    @classmethod
    def from_runs(
        cls, strategies: Sequence[Strategy], config: Config, runs: Sequence[RunResult]
    ) -> "StudyResult":
        p = summarize_runs(runs)
        return cls(
            tuple(canonical(strategies)),
            config,
            tuple(runs),
            p.mean,
            p.median,
            p.p25,
            p.p75,
            p.stddev,
            p.run_stddev,
        )

    @property
    def label(self) -> str:
        return strategy_label(self.strategies)

    @property
    def bitmask(self) -> int:
        return strategy_bitmask(self.strategies)

    def success_rate(self, threshold: float) -> float:
        return sum(r.final_best.fidelity >= threshold for r in self.runs) / len(self.runs)


def per_target_scores(runs: Sequence[RunResult]) -> Dict[str, float]:
    """Mean final composite of each target over its seeds."""
    finals: Dict[str, List[float]] = defaultdict(list)
    for run in runs:
        finals[run.target_id].append(run.final_best.composite)
    return {t: math.fsum(scores) / len(scores) for t, scores in finals.items()}


def summarize_runs(runs: Sequence[RunResult]) -> Performance:
    if not runs:
        raise EmptyStudy("A study needs at least one run.")
    scores = list(per_target_scores(runs).values())
    mean = math.fsum(scores) / len(scores)
    median, p25, p75 = (float(np.percentile(scores, q)) for q in (50, 25, 75))
    finals = [r.final_best.composite for r in runs]
    return Performance(
        mean=mean,
        median=median,
        p25=p25,
        p75=p75,
        stddev=float(np.std(scores)),
        run_stddev=float(np.std(finals)),
    )


def performance_metric(study: StudyResult) -> float:
    """Mean over targets of the seed-averaged best final composite."""
    return summarize_runs(study.runs).mean


def run_study(
    dataset: Sequence[TargetRecord],
    strategy_sets: Sequence[Sequence[Strategy]],
    config: Config,
    seeds: Sequence[int],
    deadline: Optional[float] = None,
    progress_bar: bool = True,
) -> List[StudyResult]:
    """Run every (strategy set, target, seed) and rank the strategy sets.

    All sets share the dataset, the seeds and the non-mutation settings.
    Each run draws from its own stream, so the result of a set does not
    depend on the other sets. Results are sorted by decreasing performance,
    ties in canonical set order.

    """
    if not dataset:
        raise EmptyStudy("The dataset is empty.")
    if not seeds:
        raise EmptyStudy("A study needs at least one seed.")
    sets = sorted({canonical(s) for s in strategy_sets}, key=strategy_bitmask)
    if not sets or not all(sets):
        raise EmptyStudy("A study needs non-empty strategy sets.")

    total = len(sets) * len(dataset) * len(seeds)
    logger.info(
        "study: %d strategy set(s) x %d target(s) x %d seed(s) = %d run(s)",
        len(sets),
        len(dataset),
        len(seeds),
        total,
    )

    results = []
    with tqdm(total=total, disable=not progress_bar, desc="runs") as progress:
        for strategies in sets:
            set_config = override(
                config, {"evolutionary.strategies": [s.value for s in strategies]}
            )
            runs = []
            for target in dataset:
                for seed in seeds:
                    runs.append(
                        run_single(
                            target, set_config, seed, deadline=deadline, progress_bar=False
                        )
                    )
                    progress.update(1)
            study = StudyResult.from_runs(strategies, set_config, runs)
            logger.info("study: %s performance %.6f", study.label, study.performance)
            results.append(study)

    return sorted(results, key=lambda s: -s.performance)


def run_commands(
    dataset_path: str,
    config_path: Optional[str],
    dataset: Sequence[TargetRecord],
    strategy_sets: Sequence[Sequence[Strategy]],
    seeds: Sequence[int],
) -> List[str]:
    """One `qevo run` command line per run of a study, for external schedulers."""
    sets = sorted({canonical(s) for s in strategy_sets}, key=strategy_bitmask)
    config_flag = f" --config {config_path}" if config_path else ""
    return [
        f"qevo run{config_flag} --dataset {dataset_path} --target {target.id}"
        f" --seed-index {seed} --strategies {','.join(s.value for s in strategies)}"
        for strategies in sets
        for target in dataset
        for seed in seeds
    ]
