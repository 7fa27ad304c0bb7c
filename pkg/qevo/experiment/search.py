"""Two-stage random search over the configuration.

The first stage explores the shape of the search space: depth bounds and
islands. The second stage tunes the mutation operators and the population
around the best first-stage configuration, passed as `base_config`.

Each trial overrides the base configuration with sampled values and is
scored by the performance of a study on (a subset of) the dataset. Trials
that fail or exceed `run.trial_timeout` are recorded and skipped.

"""
import json
import logging
import math
import time
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Callable, Dict, List, Mapping, NamedTuple, Optional, Sequence, Union

import numpy as np

from qevo.config import Config, override
from qevo.dataset import TargetRecord
from qevo.errors import ConfigError, ConfigParseError, EmptyStudy, InvalidInput, TrialTimeout
from qevo.experiment.study import run_study
from qevo.jax import generator

__all__ = [
    "Choices",
    "Range",
    "STAGE_PARAMETERS",
    "SearchResult",
    "Trial",
    "TrialOutcome",
    "check_domain",
    "check_within",
    "hyperparameter_search",
    "load_bounds",
    "parameter_type",
    "parse_bounds",
    "sample_params",
]

logger = logging.getLogger(__name__)

STAGE_PARAMETERS = {
    1: frozenset(
        {
            "population.min_depth",
            "population.max_depth",
            "island.count",
            "island.enabled",
        }
    ),
    2: frozenset(
        {
            "evolutionary.mutation_rate",
            "evolutionary.mutations_per_candidate",
            "evolutionary.adaptive",
            "population.tournament_k",
            "population.elite_count",
            "population.immigrant_count",
            "population.size",
        }
    ),
}


class Range(NamedTuple):
    """Uniform over [low, high].

    Integer parameters draw integers; when the type of the parameter is
    unknown, integers are drawn only if both bounds are integers.
    """

    low: float
    high: float

    def sample(self, rng: np.random.Generator, kind: Optional[type] = None):
        if kind is None:
            kind = int if isinstance(self.low, int) and isinstance(self.high, int) else float
        if kind is int:
            return int(rng.integers(math.ceil(self.low), math.floor(self.high) + 1))
        return float(rng.uniform(self.low, self.high))

    @property
    def values(self) -> tuple:
        return (self.low, self.high)

    def contains(self, other: "Bound") -> bool:
        return all(self.low <= v <= self.high for v in other.values)


class Choices(NamedTuple):
    values: tuple

    def sample(self, rng: np.random.Generator, kind: Optional[type] = None):
        return self.values[int(rng.integers(len(self.values)))]

    def contains(self, other: "Bound") -> bool:
        return isinstance(other, Choices) and set(other.values) <= set(self.values)


Bound = Union[Range, Choices]
Params = Dict[str, Any]


class TrialOutcome(NamedTuple):
    """Score of a trial, with the mean fidelity and depth of its best circuits."""

    score: float
    fidelity: Optional[float] = None
    depth: Optional[float] = None


class Trial(NamedTuple):
    number: int
    params: Params
    score: Optional[float]
    state: str
    error: str = ""
    fidelity: Optional[float] = None
    depth: Optional[float] = None


class SearchResult(NamedTuple):
    best_config: Config
    best_params: Params
    best_score: float
    trials: List[Trial]


def _check_stage(stage: int, names) -> None:
    if stage not in STAGE_PARAMETERS:
        raise InvalidInput(f"The search has stages 1 and 2, got {stage}.")
    unknown = sorted(set(names) - STAGE_PARAMETERS[stage])
    if unknown:
        raise InvalidInput(
            f"Stage {stage} does not search {', '.join(unknown)}; it searches"
            f" {', '.join(sorted(STAGE_PARAMETERS[stage]))}."
        )


def parameter_type(name: str) -> Optional[type]:
    """The type of a `section.key` configuration parameter, None if unknown."""
    field = _field(name)
    return None if field is None else field.annotation


def _field(name: str):
    section, _, key = name.partition(".")
    if section not in Config.model_fields:
        return None
    return Config.model_fields[section].annotation.model_fields.get(key)


def check_domain(name: str, bound: Bound) -> None:
    """Reject bounds reaching outside the values the parameter accepts."""
    field = _field(name)
    if field is None:
        return
    for value in bound.values:
        for constraint in field.metadata:
            for attribute, holds in DOMAIN_CHECKS.items():
                limit = getattr(constraint, attribute, None)
                if limit is not None and not holds(value, limit):
                    raise InvalidInput(
                        f"{name}: {value!r} is outside the domain of the parameter"
                        f" ({attribute} {limit})."
                    )


DOMAIN_CHECKS = {
    "ge": lambda value, limit: value >= limit,
    "gt": lambda value, limit: value > limit,
    "le": lambda value, limit: value <= limit,
    "lt": lambda value, limit: value < limit,
}


def check_within(bounds: Mapping[str, Bound], outer: Mapping[str, Bound]) -> None:
    """Check that the bounds narrow `outer` on every parameter both name."""
    for name in sorted(set(bounds) & set(outer)):
        if not outer[name].contains(bounds[name]):
            raise InvalidInput(
                f"{name}: {bounds[name].values} is not within {outer[name].values}."
            )


def _parse_bound(name: str, spec: Any) -> Bound:
    if not isinstance(spec, Mapping):
        raise InvalidInput(f"{name}: expected a table with low/high or choices.")
    if "choices" in spec:
        values = tuple(spec["choices"])
        if not values:
            raise InvalidInput(f"{name}: choices must not be empty.")
        return Choices(values)
    try:
        low, high = spec["low"], spec["high"]
    except KeyError as e:
        raise InvalidInput(f"{name}: missing {e.args[0]}.") from e
    if low > high:
        raise InvalidInput(f"{name}: low ({low}) exceeds high ({high}).")
    return Range(low, high)


def parse_bounds(data: Mapping[str, Any]) -> Dict[str, Bound]:
    """Bounds from `{section: {key: {low, high} | {choices}}}`."""
    bounds = {}
    for section, keys in data.items():
        if not isinstance(keys, Mapping):
            raise InvalidInput(f"{section}: expected a table of parameters.")
        for key, spec in keys.items():
            name = f"{section}.{key}"
            bounds[name] = _parse_bound(name, spec)
    return bounds


def load_bounds(path: Union[str, Path]) -> Dict[str, Bound]:
    try:
        data = tomllib.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigError(f"cannot read the bounds {path}: {e.strerror}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigParseError(str(e)) from e
    return parse_bounds(data)


def sample_params(bounds: Mapping[str, Bound], rng: np.random.Generator) -> Params:
    params = {
        name: bounds[name].sample(rng, parameter_type(name)) for name in sorted(bounds)
    }
    lo, hi = params.get("population.min_depth"), params.get("population.max_depth")
    if lo is not None and hi is not None and lo > hi:
        params["population.min_depth"], params["population.max_depth"] = hi, lo
    return params


def study_objective(
    dataset: Sequence[TargetRecord], seeds: Sequence[int]
) -> Callable[[Config, Optional[float]], float]:
    """Performance of a study with the configuration's own strategy set."""

    def objective(config: Config, deadline: Optional[float] = None) -> TrialOutcome:
        (study,) = run_study(
            dataset,
            [tuple(config.evolutionary.strategies)],
            config,
            seeds,
            deadline=deadline,
            progress_bar=False,
        )
        return TrialOutcome(
            study.performance,
            math.fsum(r.final_best.fidelity for r in study.runs) / len(study.runs),
            math.fsum(r.best_candidate.depth for r in study.runs) / len(study.runs),
        )

    return objective


def hyperparameter_search(
    stage: int,
    bounds: Mapping[str, Bound],
    budget: int,
    dataset: Sequence[TargetRecord],
    base_config: Config,
    rng_key,
    seeds: Sequence[int] = (1,),
    subset: Optional[int] = None,
    enqueued: Sequence[Params] = (),
    objective: Optional[Callable] = None,
    within: Optional[Mapping[str, Bound]] = None,
) -> SearchResult:
    """Random search of `budget` trials; returns the best configuration.

    Parameters
    ----------
    stage
        1 or 2; each stage may only search its own parameters.
    bounds
        Range or choices of each searched `section.key` parameter.
    budget
        Number of trials, enqueued ones included.
    dataset, seeds, subset
        Trials run a study on the first `subset` targets of the dataset.
    base_config
        Configuration the sampled values override.
    enqueued
        Parameter sets evaluated before any random draw.
    objective
        Replaces the study score; called as `objective(config, deadline)`,
        it returns a score or a `TrialOutcome`.
    within
        Wider bounds the searched ones must narrow, typically those of the
        previous stage.

    """
    if budget < 1:
        raise InvalidInput(f"The budget must be at least 1, got {budget}.")
    _check_stage(stage, bounds)
    for name, bound in bounds.items():
        check_domain(name, bound)
    if within is not None:
        check_within(bounds, within)
    for params in enqueued:
        _check_stage(stage, params)

    targets = list(dataset)[:subset] if subset else list(dataset)
    objective = objective or study_objective(targets, seeds)
    rng = generator(rng_key)

    candidates = [dict(p) for p in enqueued][:budget]
    while len(candidates) < budget:
        candidates.append(sample_params(bounds, rng))

    trials: List[Trial] = []
    best: Optional[tuple] = None
    for number, params in enumerate(candidates):
        try:
            config = override(base_config, params)
            deadline = time.monotonic() + config.run.trial_timeout
            outcome = objective(config, deadline)
            if not isinstance(outcome, TrialOutcome):
                outcome = TrialOutcome(float(outcome))
            score = float(outcome.score)
        except TrialTimeout as e:
            trials.append(Trial(number, params, None, "timeout", str(e)))
            logger.warning("search: trial %d timed out", number)
            continue
        except Exception as e:
            trials.append(Trial(number, params, None, "failed", repr(e)))
            logger.warning("search: trial %d failed: %r", number, e)
            continue

        trials.append(
            Trial(number, params, score, "complete", "", outcome.fidelity, outcome.depth)
        )
        logger.info(
            "search: trial %d/%d score %.6f %s",
            number + 1,
            budget,
            score,
            json.dumps(params, sort_keys=True),
        )
        if best is None or score > best[2]:
            best = (config, params, score)

    if best is None:
        raise EmptyStudy(f"None of the {budget} trial(s) completed.")
    return SearchResult(best[0], best[1], best[2], trials)
