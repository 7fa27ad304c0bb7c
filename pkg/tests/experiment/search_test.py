import numpy as np
import pytest
from jax import random

from qevo.errors import EmptyStudy, InvalidInput, TrialTimeout
from qevo.experiment.search import (
    Choices,
    Range,
    TrialOutcome,
    check_domain,
    check_within,
    hyperparameter_search,
    load_bounds,
    parameter_type,
    parse_bounds,
    sample_params,
)


@pytest.fixture
def rng_key():
    return random.PRNGKey(0)


RATE_BOUNDS = {"evolutionary.mutation_rate": Range(0.0, 1.0)}


def distance_to(rate):
    def objective(config, deadline):
        return -abs(config.evolutionary.mutation_rate - rate)

    return objective


#
# SEARCH
#


def test_enqueued_parameters_win(dataset, config, rng_key):
    planted = {"evolutionary.mutation_rate": 0.123}
    result = hyperparameter_search(
        2, RATE_BOUNDS, 10, dataset, config, rng_key,
        enqueued=[planted], objective=distance_to(0.123),
    )
    assert result.best_params == planted
    assert result.best_score == 0.0
    assert result.best_config.evolutionary.mutation_rate == 0.123
    assert len(result.trials) == 10
    assert result.trials[0].params == planted


def test_budget_of_one(dataset, config, rng_key):
    result = hyperparameter_search(
        2, RATE_BOUNDS, 1, dataset, config, rng_key, objective=distance_to(0.5)
    )
    assert len(result.trials) == 1
    assert result.best_params == result.trials[0].params


def test_search_is_deterministic(dataset, config, rng_key):
    first = hyperparameter_search(2, RATE_BOUNDS, 5, dataset, config, rng_key, objective=distance_to(0.3))
    second = hyperparameter_search(2, RATE_BOUNDS, 5, dataset, config, rng_key, objective=distance_to(0.3))
    assert first.trials == second.trials
    assert first.best_params == second.best_params


def test_failed_trials_are_recorded(dataset, config, rng_key):
    def objective(config, deadline):
        rate = config.evolutionary.mutation_rate
        if rate < 0.2:
            raise TrialTimeout("too slow")
        if rate > 0.8:
            raise RuntimeError("diverged")
        return rate

    enqueued = [
        {"evolutionary.mutation_rate": 0.1},
        {"evolutionary.mutation_rate": 0.9},
        {"evolutionary.mutation_rate": 0.5},
    ]
    result = hyperparameter_search(
        2, RATE_BOUNDS, 3, dataset, config, rng_key, enqueued=enqueued, objective=objective
    )
    assert [t.state for t in result.trials] == ["timeout", "failed", "complete"]
    assert result.trials[1].error == repr(RuntimeError("diverged"))
    assert result.best_score == 0.5


def test_invalid_configurations_are_failed_trials(dataset, config, rng_key):
    enqueued = [{"population.size": 2}, {"population.size": 20}]
    bounds = {"population.size": Range(2, 50)}
    result = hyperparameter_search(
        2, bounds, 2, dataset, config, rng_key, enqueued=enqueued,
        objective=lambda config, deadline: 1.0,
    )
    assert [t.state for t in result.trials] == ["failed", "complete"]


def test_no_completed_trial(dataset, config, rng_key):
    def objective(config, deadline):
        raise RuntimeError("nope")

    with pytest.raises(EmptyStudy):
        hyperparameter_search(2, RATE_BOUNDS, 3, dataset, config, rng_key, objective=objective)


stage_errors = [
    {"stage": 1, "bounds": RATE_BOUNDS},
    {"stage": 2, "bounds": {"island.count": Range(1, 4)}},
    {"stage": 3, "bounds": RATE_BOUNDS},
]


@pytest.mark.parametrize("case", stage_errors)
def test_parameters_belong_to_their_stage(dataset, config, rng_key, case):
    with pytest.raises(InvalidInput):
        hyperparameter_search(case["stage"], case["bounds"], 2, dataset, config, rng_key)


def test_budget_is_positive(dataset, config, rng_key):
    with pytest.raises(InvalidInput):
        hyperparameter_search(2, RATE_BOUNDS, 0, dataset, config, rng_key)


@pytest.mark.slow
def test_search_with_studies(dataset, config, rng_key):
    bounds = {"population.min_depth": Range(2, 4), "population.max_depth": Range(4, 6)}
    result = hyperparameter_search(1, bounds, 2, dataset, config, rng_key, subset=1)
    assert [t.state for t in result.trials] == ["complete", "complete"]
    for trial in result.trials:
        assert 0.0 <= trial.fidelity <= 1.0
        assert 0 <= trial.depth <= 6
    assert result.best_score == max(t.score for t in result.trials)


#
# BOUNDS
#


def test_sample_params():
    bounds = {
        "population.min_depth": Range(3, 12),
        "population.max_depth": Range(3, 12),
        "evolutionary.mutation_rate": Range(0.1, 0.2),
        "evolutionary.adaptive": Choices((True, False)),
    }
    rng = np.random.default_rng(0)
    for _ in range(200):
        params = sample_params(bounds, rng)
        assert isinstance(params["population.min_depth"], int)
        assert params["population.min_depth"] <= params["population.max_depth"]
        assert 0.1 <= params["evolutionary.mutation_rate"] <= 0.2
        assert params["evolutionary.adaptive"] in (True, False)


def test_float_parameters_are_not_rounded():
    bounds = {"evolutionary.mutation_rate": Range(0, 1)}
    rng = np.random.default_rng(0)
    rates = [sample_params(bounds, rng)["evolutionary.mutation_rate"] for _ in range(100)]
    assert all(isinstance(r, float) for r in rates)
    assert len(set(rates)) == 100
    assert all(0.0 <= r <= 1.0 for r in rates)


def test_integer_parameters_draw_integers_from_float_bounds():
    bounds = {"population.size": Range(10.5, 12.5)}
    rng = np.random.default_rng(0)
    sizes = {sample_params(bounds, rng)["population.size"] for _ in range(100)}
    assert sizes == {11, 12}


parameter_types = [
    {"name": "evolutionary.mutation_rate", "type": float},
    {"name": "population.size", "type": int},
    {"name": "island.enabled", "type": bool},
    {"name": "nowhere.key", "type": None},
]


@pytest.mark.parametrize("case", parameter_types)
def test_parameter_type(case):
    assert parameter_type(case["name"]) is case["type"]


out_of_domain = [
    {"name": "evolutionary.mutation_rate", "bound": Range(0.5, 1.5)},
    {"name": "population.size", "bound": Range(1, 10)},
    {"name": "island.count", "bound": Choices((0, 2))},
]


@pytest.mark.parametrize("case", out_of_domain)
def test_bounds_outside_the_domain_are_rejected(dataset, config, rng_key, case):
    with pytest.raises(InvalidInput):
        check_domain(case["name"], case["bound"])
    stage = 1 if case["name"].startswith("island") else 2
    with pytest.raises(InvalidInput):
        hyperparameter_search(stage, {case["name"]: case["bound"]}, 1, dataset, config, rng_key)


def test_second_stage_bounds_narrow_the_first(dataset, config, rng_key):
    wide = parse_bounds({"evolutionary": {"mutation_rate": {"low": 0.0, "high": 0.6}}})
    narrow = {"evolutionary.mutation_rate": Range(0.1, 0.3)}
    too_wide = {"evolutionary.mutation_rate": Range(0.1, 0.8)}

    check_within(narrow, wide)
    with pytest.raises(InvalidInput):
        check_within(too_wide, wide)
    with pytest.raises(InvalidInput):
        hyperparameter_search(
            2, too_wide, 1, dataset, config, rng_key,
            objective=distance_to(0.2), within=wide,
        )
    result = hyperparameter_search(
        2, narrow, 2, dataset, config, rng_key, objective=distance_to(0.2), within=wide
    )
    assert all(0.1 <= t.params["evolutionary.mutation_rate"] <= 0.3 for t in result.trials)


def test_choices_within_choices():
    assert Choices((2, 4, 5)).contains(Choices((2, 4)))
    assert not Choices((2, 4)).contains(Choices((2, 8)))
    assert Range(1, 8).contains(Choices((2, 4)))
    assert not Choices((2, 4)).contains(Range(2, 4))


def test_objective_outcome_is_recorded(dataset, config, rng_key):
    def objective(config, deadline):
        return TrialOutcome(0.5, fidelity=0.9, depth=7.5)

    result = hyperparameter_search(2, RATE_BOUNDS, 1, dataset, config, rng_key, objective=objective)
    (trial,) = result.trials
    assert (trial.score, trial.fidelity, trial.depth) == (0.5, 0.9, 7.5)


def test_load_bounds(tmp_path):
    path = tmp_path / "bounds.toml"
    path.write_text(
        "[evolutionary]\n"
        "mutation_rate = { low = 0.05, high = 0.5 }\n"
        "adaptive = { choices = [true, false] }\n"
        "[population]\n"
        "size = { low = 40, high = 120 }\n"
    )
    assert load_bounds(path) == {
        "evolutionary.mutation_rate": Range(0.05, 0.5),
        "evolutionary.adaptive": Choices((True, False)),
        "population.size": Range(40, 120),
    }


@pytest.mark.parametrize(
    "text",
    [
        "[population]\nsize = { low = 10, high = 5 }\n",
        "[population]\nsize = { low = 10 }\n",
        "[population]\nsize = { choices = [] }\n",
        "[population]\nsize = 10\n",
        "population = 3\n",
    ],
)
def test_invalid_bounds(tmp_path, text):
    path = tmp_path / "bounds.toml"
    path.write_text(text)
    with pytest.raises(InvalidInput):
        load_bounds(path)
