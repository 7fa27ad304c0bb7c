"""Study reports.

`emit_report` writes, in the output directory:

- `summary.csv`: one row per strategy set with the mean, median and
  quartiles of the per-target scores;
- `runs.csv`: one row per run with its final scores and per-generation
  series (space-separated);
- `hist_<set>.csv`: histogram of the final composites of a set's runs;
- `presence.csv`: for each strategy, the mean performance of the sets that
  include it and of those that do not;
- `ranking.txt`: the sets from best to worst;
- `trials.csv`: the search trials, when given, with the mean fidelity and
  depth of the best circuits of each trial.

Files contain no timing, so identical studies give identical files.

"""
import csv
import json
import logging
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np

from qevo.core.circuit import t_count
from qevo.errors import EmptyStudy
from qevo.evolution.mutations import Strategy
from qevo.experiment.search import Trial
from qevo.experiment.study import StudyResult

__all__ = ["HISTOGRAM_BINS", "emit_report", "emit_runs", "histogram"]

logger = logging.getLogger(__name__)

HISTOGRAM_BINS = 20


def _float(value: float) -> str:
    return repr(float(value))


def _optional(value: Optional[float]) -> str:
    return "" if value is None else _float(value)


def _series(values: Iterable[float]) -> str:
    return " ".join(_float(v) for v in values)


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def histogram(values: Sequence[float], bins: int = HISTOGRAM_BINS):
    """Counts and edges over [min(0, lowest), max(1, highest)]."""
    values = np.asarray(values, dtype=float)
    low = min(0.0, float(values.min())) if values.size else 0.0
    high = max(1.0, float(values.max())) if values.size else 1.0
    return np.histogram(values, bins=bins, range=(low, high))


def _summary(studies: Sequence[StudyResult], out_dir: Path) -> Path:
    rows = []
    for study in studies:
        threshold = study.config.fitness.success_fidelity
        rows.append(
            [
                study.label,
                study.bitmask,
                len(study.runs),
                _float(study.performance),
                _float(study.median),
                _float(study.p25),
                _float(study.p75),
                _float(study.stddev),
                _float(study.run_stddev),
                _float(study.success_rate(threshold)),
            ]
        )
    header = [
        "strategies",
        "bitmask",
        "runs",
        "mean",
        "median",
        "p25",
        "p75",
        "stddev",
        "run_stddev",
        "success_rate",
    ]
    return _write_csv(out_dir / "summary.csv", header, rows)


def emit_runs(studies: Sequence[StudyResult], out_dir: Path) -> Path:
    header = [
        "strategies",
        "target_id",
        "seed",
        "generations",
        "eval_mode",
        "final_fidelity",
        "final_composite",
        "final_depth",
        "final_t_count",
        "best_composite",
        "best_fidelity",
        "mean_depth",
        "best_depth",
    ]
    rows = []
    for study in studies:
        for run in study.runs:
            history = run.history
            rows.append(
                [
                    study.label,
                    run.target_id,
                    run.seed,
                    run.generations,
                    run.eval_mode,
                    _float(run.final_best.fidelity),
                    _float(run.final_best.composite),
                    run.best_candidate.depth,
                    t_count(run.best_candidate.circuit),
                    _series(history.best_composite),
                    _series(history.best_fidelity),
                    _series(history.mean_depth),
                    " ".join(str(d) for d in history.best_depth),
                ]
            )
    return _write_csv(out_dir / "runs.csv", header, rows)


def _histograms(studies: Sequence[StudyResult], out_dir: Path) -> List[Path]:
    paths = []
    for study in studies:
        counts, edges = histogram([r.final_best.composite for r in study.runs])
        rows = [
            [_float(lo), _float(hi), int(n)] for lo, hi, n in zip(edges[:-1], edges[1:], counts)
        ]
        paths.append(
            _write_csv(out_dir / f"hist_{study.label}.csv", ["low", "high", "count"], rows)
        )
    return paths


def _presence(studies: Sequence[StudyResult], out_dir: Path) -> Path:
    rows = []
    for strategy in Strategy:
        present = [s.performance for s in studies if strategy in s.strategies]
        absent = [s.performance for s in studies if strategy not in s.strategies]
        rows.append(
            [
                strategy.value,
                len(present),
                _float(np.mean(present)) if present else "",
                len(absent),
                _float(np.mean(absent)) if absent else "",
            ]
        )
    header = ["strategy", "present_sets", "present_mean", "absent_sets", "absent_mean"]
    return _write_csv(out_dir / "presence.csv", header, rows)


def _ranking(studies: Sequence[StudyResult], out_dir: Path) -> Path:
    width = max(len(s.label) for s in studies)
    lines = [
        f"{rank:>2}. {study.label:<{width}}  mean {study.performance:.4f}"
        f"  median {study.median:.4f}  p25 {study.p25:.4f}  p75 {study.p75:.4f}"
        for rank, study in enumerate(studies, start=1)
    ]
    path = out_dir / "ranking.txt"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _trials(trials: Sequence[Trial], out_dir: Path) -> Path:
    rows = [
        [
            t.number,
            t.state,
            _optional(t.score),
            _optional(t.fidelity),
            _optional(t.depth),
            json.dumps(t.params, sort_keys=True),
            t.error,
        ]
        for t in trials
    ]
    header = ["trial", "state", "score", "mean_fidelity", "mean_depth", "params", "error"]
    return _write_csv(out_dir / "trials.csv", header, rows)


def emit_report(
    studies: Sequence[StudyResult],
    out_dir: Union[str, Path],
    trials: Optional[Sequence[Trial]] = None,
) -> List[Path]:
    """Write the report files and return their paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths: List[Path] = []
    if studies:
        paths.append(_summary(studies, out_dir))
        paths.append(emit_runs(studies, out_dir))
        paths.extend(_histograms(studies, out_dir))
        paths.append(_presence(studies, out_dir))
        paths.append(_ranking(studies, out_dir))
    if trials:
        paths.append(_trials(trials, out_dir))
    if not paths:
        raise EmptyStudy("Nothing to report.")
    logger.info("report: wrote %d file(s) to %s", len(paths), out_dir)
    return paths
