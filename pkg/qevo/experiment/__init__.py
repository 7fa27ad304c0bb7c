from qevo.experiment.report import emit_report
from qevo.experiment.run import RunResult, run_single
from qevo.experiment.search import SearchResult, Trial, hyperparameter_search, load_bounds
from qevo.experiment.study import StudyResult, performance_metric, run_study

__all__ = [
    "RunResult",
    "SearchResult",
    "StudyResult",
    "Trial",
    "emit_report",
    "hyperparameter_search",
    "load_bounds",
    "performance_metric",
    "run_single",
    "run_study",
]
