import itertools
import math
from fractions import Fraction

import numpy as np
import pytest

from secretary_lab import (
    EnumerationGuardError,
    MonteCarloEstimate,
    OnlineAlgorithm,
    ParameterError,
    PriorFamily,
    Scenario,
    decimal_str,
    dynkin_policy,
    dynkin_success_probability,
    evaluate_algorithm,
    exact_expected_ratio,
    is_consistent,
    algorithm_to_policy,
    monte_carlo_estimate,
    prediction_argmax_policy,
    run_algorithm,
)

F = Fraction

# Frozen exact mixture ratios on the anchor family (eps = 1/10, s = 5,
# k = 4, n = 3), derived by summing the per-row first-arrival averages by
# hand and confirmed by the order enumeration below on first run.
PRED_ARGMAX_ANCHOR = F(359, 3125)
ACCEPT_FIRST_ANCHOR = F(3859, 9375)


def distinct_family(n: int) -> PriorFamily:
    scenario = Scenario(1, tuple(F(i) for i in range(1, n + 1)))
    return PriorFamily(
        n=n, scenarios=(scenario,), probabilities=(F(1),), prediction_id=1
    )


def acceptance_position(alg: OnlineAlgorithm, scenario: Scenario, order) -> int | None:
    step = alg.session(len(order), None)
    for position, index in enumerate(order, start=1):
        if step(index, scenario.value_at(index)).value == "accept":
            return position
    return None


# ---------------------------------------------------------------------------
# The classic threshold rule.
# ---------------------------------------------------------------------------

def test_dynkin_rejects_n_below_one():
    with pytest.raises(ParameterError):
        dynkin_policy(0)


def test_dynkin_small_horizons():
    # floor(n/e) = 0 for n <= 2: the rule takes the first arrival.
    scenario = Scenario(1, (F(1), F(2)))
    alg = dynkin_policy(2)
    assert run_algorithm(alg, scenario, (1, 2)) == 1
    assert run_algorithm(alg, scenario, (2, 1)) == 2
    assert run_algorithm(dynkin_policy(1), Scenario(1, (F(9),)), (1,)) == 9


def test_dynkin_threshold_behavior():
    scenario = Scenario(1, (F(1), F(2), F(3)))
    alg = dynkin_policy(3)
    assert run_algorithm(alg, scenario, (3, 2, 1)) == 1  # forced last pick
    assert run_algorithm(alg, scenario, (1, 3, 2)) == 3
    assert run_algorithm(alg, scenario, (2, 1, 3)) == 3


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_dynkin_never_accepts_inside_prefix(n):
    from secretary_lab.exact import floor_n_over_e

    alg = dynkin_policy(n)
    scenario = distinct_family(n).scenarios[0]
    cutoff = floor_n_over_e(n)
    for order in itertools.permutations(range(1, n + 1)):
        position = acceptance_position(alg, scenario, order)
        assert position is not None and position > cutoff


@pytest.mark.parametrize(
    "n,expected",
    [
        (1, F(1)),
        (2, F(1, 2)),
        (3, F(1, 2)),
        (4, F(11, 24)),
        (5, F(5, 12)),
    ],
)
def test_dynkin_success_probability_anchors(n, expected):
    assert dynkin_success_probability(n) == expected


def test_dynkin_success_probability_at_100():
    assert decimal_str(dynkin_success_probability(100), 12) == "0.371014595504"


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_dynkin_success_probability_matches_exhaustive_count(n):
    alg = dynkin_policy(n)
    scenario = distinct_family(n).scenarios[0]
    wins = sum(
        run_algorithm(alg, scenario, order) == F(n)
        for order in itertools.permutations(range(1, n + 1))
    )
    assert dynkin_success_probability(n) == F(wins, math.factorial(n))


def test_dynkin_success_probability_rejects_bad_n():
    with pytest.raises(ParameterError):
        dynkin_success_probability(0)


# ---------------------------------------------------------------------------
# The trust-the-predictions rule.
# ---------------------------------------------------------------------------

def test_pred_argmax_anchor_value(anchor_family):
    alg = prediction_argmax_policy(anchor_family.prediction().values)
    assert exact_expected_ratio(alg, anchor_family) == PRED_ARGMAX_ANCHOR
    assert evaluate_algorithm(alg, anchor_family).optimum == PRED_ARGMAX_ANCHOR


def test_pred_argmax_is_consistent(anchor_family):
    alg = prediction_argmax_policy(anchor_family.prediction().values)
    policy = algorithm_to_policy(alg, anchor_family)
    assert is_consistent(policy, anchor_family.prediction())


def test_pred_argmax_with_tied_predictions_accepts_first(anchor_family):
    alg = prediction_argmax_policy((F(2), F(2), F(2)))
    assert exact_expected_ratio(alg, anchor_family) == ACCEPT_FIRST_ANCHOR


def test_pred_argmax_perfect_on_single_scenario():
    family = distinct_family(4)
    alg = prediction_argmax_policy(family.prediction().values)
    assert exact_expected_ratio(alg, family) == 1


def test_pred_argmax_never_fires_when_target_absent():
    # predicted argmax is candidate 3, but the horizon is 2
    alg = prediction_argmax_policy((F(1), F(1), F(5)))
    scenario = Scenario(1, (F(3), F(1)))
    assert run_algorithm(alg, scenario, (1, 2)) is None
    batch = alg.run_batch(np.array([[0, 1]], dtype=np.int64), scenario, 2, None)
    assert batch.tolist() == [-1]


def test_pred_argmax_rejects_empty_predictions():
    with pytest.raises(ParameterError):
        prediction_argmax_policy(())


# ---------------------------------------------------------------------------
# Exact evaluation plumbing.
# ---------------------------------------------------------------------------

def test_exact_ratio_two_routes_agree(anchor_family):
    for alg in (dynkin_policy(3), prediction_argmax_policy((F(5), F(1), F(1)))):
        direct = exact_expected_ratio(alg, anchor_family)
        via_policy = evaluate_algorithm(alg, anchor_family).optimum
        assert direct == via_policy


def test_exact_ratio_guard_points_to_monte_carlo():
    family = distinct_family(9)
    with pytest.raises(EnumerationGuardError) as err:
        exact_expected_ratio(dynkin_policy(9), family)
    assert "monte_carlo" in str(err.value)


def test_hooks_agree_with_decide_everywhere(anchor_family):
    algs = [
        dynkin_policy(3),
        prediction_argmax_policy(anchor_family.prediction().values),
    ]
    for alg in algs:
        for scenario in anchor_family.scenarios:
            for order in itertools.permutations(range(1, 4)):
                expected = run_algorithm(alg, scenario, order)
                step = alg.session(3, None)
                session_value = None
                for index in order:
                    if step(index, scenario.value_at(index)).value == "accept":
                        session_value = scenario.value_at(index)
                        break
                assert session_value == expected
                block = np.array([[i - 1 for i in order]], dtype=np.int64)
                accepted = alg.run_batch(block, scenario, 3, None)[0]
                batch_value = (
                    None if accepted < 0 else scenario.values[int(accepted)]
                )
                assert batch_value == expected


# ---------------------------------------------------------------------------
# Monte Carlo.
# ---------------------------------------------------------------------------

def test_monte_carlo_is_deterministic(anchor_family):
    alg = dynkin_policy(3)
    a = monte_carlo_estimate(alg, anchor_family, trials=300, seed=42)
    b = monte_carlo_estimate(alg, anchor_family, trials=300, seed=42)
    assert a.mean_exact == b.mean_exact
    assert a.std_error == b.std_error
    c = monte_carlo_estimate(alg, anchor_family, trials=300, seed=43)
    assert c.mean_exact != a.mean_exact


def test_monte_carlo_paths_are_bit_identical(anchor_family):
    full = dynkin_policy(3)
    session_only = OnlineAlgorithm(full.name, full.decide, full.session, None)
    decide_only = OnlineAlgorithm(full.name, full.decide, None, None)
    estimates = [
        monte_carlo_estimate(alg, anchor_family, trials=400, seed=5)
        for alg in (full, session_only, decide_only)
    ]
    assert estimates[0].mean_exact == estimates[1].mean_exact == estimates[2].mean_exact


def test_monte_carlo_tracks_exact_value(anchor_family):
    alg = dynkin_policy(3)
    exact = exact_expected_ratio(alg, anchor_family)
    estimate = monte_carlo_estimate(alg, anchor_family, trials=2000, seed=7)
    assert abs(estimate.mean_exact - exact) <= 4 * F(estimate.std_error).limit_denominator(10**12)


def test_monte_carlo_success_metric():
    family = distinct_family(4)
    estimate = monte_carlo_estimate(
        dynkin_policy(4), family, trials=3000, seed=1, metric="success"
    )
    exact = dynkin_success_probability(4)
    assert abs(estimate.mean_exact - exact) <= F(4 * estimate.std_error).limit_denominator(10**12)


def test_monte_carlo_single_trial(anchor_family):
    estimate = monte_carlo_estimate(dynkin_policy(3), anchor_family, trials=1, seed=0)
    assert estimate.std_error == 0.0
    assert estimate.trials == 1


def test_monte_carlo_validation(anchor_family):
    with pytest.raises(ParameterError):
        monte_carlo_estimate(dynkin_policy(3), anchor_family, trials=0, seed=0)
    with pytest.raises(ParameterError):
        monte_carlo_estimate(
            dynkin_policy(3), anchor_family, trials=10, seed=0, metric="regret"
        )


def test_estimate_rendering():
    estimate = MonteCarloEstimate(
        mean_exact=F(3, 8), std_error=0.25, trials=16, seed=9, metric="ratio"
    )
    assert estimate.mean == "0.375000000000"
    payload = estimate.to_dict(digits=4)
    assert payload["mean"] == "0.3750"
    assert payload["trials"] == 16
    assert payload["metric"] == "ratio"
