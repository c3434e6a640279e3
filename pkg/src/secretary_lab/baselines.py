"""Reference online algorithms and estimators for their expected ratios.

Two baselines: the classic wait-then-pick threshold rule and the rule
that trusts the announced predictions and waits for their argmax.  Both
are expressed as pure decision functions of the visible history, so they
can be scored three interchangeable ways: exact enumeration of arrival
orders, conversion to an explicit state policy, or seeded Monte Carlo
for sizes where n! is out of reach.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import EnumerationGuardError, ParameterError
from .exact import decimal_str, floor_n_over_e
from .instances import PriorFamily, Scenario, competitive_ratio, scenario_max
from .policy import (
    MAX_ENUMERATION_N,
    Action,
    Policy,
    SolveReport,
    evaluate_policy,
    reachable_states,
)

History = tuple[tuple[int, Fraction], ...]
Arrival = tuple[int, Fraction]
DecideFn = Callable[[History, Arrival, int, Sequence[Fraction] | None], Action]
# A step function consumes arrivals one at a time and may keep running
# state; it must agree with the pure decide function on every history.
StepFn = Callable[[int, Fraction], Action]
# A batch runner takes a (trials, n) matrix of 0-based arrival orders for
# one scenario and returns the 0-based accepted candidate per trial
# (-1 when nothing is accepted); it must agree with decide on every order.
BatchFn = Callable[[np.ndarray, Scenario, int, Sequence[Fraction] | None], np.ndarray]


@dataclass(frozen=True)
class OnlineAlgorithm:
    """A named streaming decision rule.

    decide is pure: the action depends only on the visible history, the
    current arrival, the horizon, and the announced predictions.  session
    and run_batch are optional equivalents the Monte Carlo loop prefers,
    in that order: session keeps running prefix statistics instead of
    rescanning the history, run_batch decides whole blocks of arrival
    orders at once.  Both must reproduce decide exactly.
    """

    name: str
    decide: DecideFn
    session: Callable[[int, Sequence[Fraction] | None], StepFn] | None = None
    run_batch: BatchFn | None = None


def dynkin_policy(n: int) -> OnlineAlgorithm:
    """Classic threshold rule: let pass the first floor(n/e) arrivals,
    then take the first value at least the prefix maximum.

    The cutoff is certified through the rational enclosure of e.  If no
    later arrival qualifies, the final arrival is accepted so the reward
    is always defined.
    """
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    cutoff = floor_n_over_e(n)

    def decide(
        history: History,
        current: Arrival,
        horizon: int,
        predictions: Sequence[Fraction] | None,
    ) -> Action:
        position = len(history) + 1
        if position <= cutoff:
            return Action.REJECT
        if cutoff == 0 or current[1] >= max(v for _, v in history[:cutoff]):
            return Action.ACCEPT
        if position == horizon:
            return Action.ACCEPT
        return Action.REJECT

    def session(horizon: int, predictions: Sequence[Fraction] | None) -> StepFn:
        seen = 0
        prefix_max: Fraction | None = None

        def step(index: int, value: Fraction) -> Action:
            nonlocal seen, prefix_max
            seen += 1
            if seen <= cutoff:
                if prefix_max is None or value > prefix_max:
                    prefix_max = value
                return Action.REJECT
            if prefix_max is None or value >= prefix_max or seen == horizon:
                return Action.ACCEPT
            return Action.REJECT

        return step

    def run_batch(
        orders: np.ndarray,
        scenario: Scenario,
        horizon: int,
        predictions: Sequence[Fraction] | None,
    ) -> np.ndarray:
        # Dense ranks order exactly as the exact values do, so the >=
        # comparisons below are free of rounding.
        ranks = _dense_ranks(scenario.values)
        arrived = ranks[orders]
        trials = orders.shape[0]
        if cutoff > 0:
            prefix_max = arrived[:, :cutoff].max(axis=1)
            qualifies = arrived[:, cutoff:] >= prefix_max[:, None]
        else:
            qualifies = np.ones((trials, horizon), dtype=bool)
        qualifies[:, -1] = True
        first = qualifies.argmax(axis=1) + cutoff
        return orders[np.arange(trials), first]

    return OnlineAlgorithm(
        name="dynkin", decide=decide, session=session, run_batch=run_batch
    )


def _dense_ranks(values: Sequence[Fraction]) -> np.ndarray:
    """Map each candidate to the rank of its value (equal values share a
    rank), comparing exactly before anything touches numpy."""
    ordering = {value: position for position, value in enumerate(sorted(set(values)))}
    return np.array([ordering[value] for value in values], dtype=np.int64)


def prediction_argmax_policy(predictions: Sequence[Fraction]) -> OnlineAlgorithm:
    """Trust-the-predictions rule: accept the first arriving candidate
    whose predicted value attains the predicted maximum."""
    predicted = tuple(Fraction(v) for v in predictions)
    if not predicted:
        raise ParameterError("predictions must be non-empty")
    best = max(predicted)
    argmax = frozenset(i for i, v in enumerate(predicted, start=1) if v == best)

    def decide(
        history: History,
        current: Arrival,
        horizon: int,
        _predictions: Sequence[Fraction] | None,
    ) -> Action:
        return Action.ACCEPT if current[0] in argmax else Action.REJECT

    def session(horizon: int, _predictions: Sequence[Fraction] | None) -> StepFn:
        def step(index: int, value: Fraction) -> Action:
            return Action.ACCEPT if index in argmax else Action.REJECT

        return step

    def run_batch(
        orders: np.ndarray,
        scenario: Scenario,
        horizon: int,
        _predictions: Sequence[Fraction] | None,
    ) -> np.ndarray:
        targets = np.array(sorted(i - 1 for i in argmax), dtype=np.int64)
        hits = np.isin(orders, targets)
        first = hits.argmax(axis=1)
        accepted = orders[np.arange(orders.shape[0]), first]
        # if no argmax index ever arrives (predictions longer than the
        # horizon), the rule never accepts
        return np.where(hits.any(axis=1), accepted, -1)

    return OnlineAlgorithm(
        name="pred-argmax", decide=decide, session=session, run_batch=run_batch
    )


def run_algorithm(
    alg: OnlineAlgorithm, scenario: Scenario, order: Sequence[int]
) -> Fraction | None:
    """Accepted value when the algorithm faces one arrival order."""
    n = len(scenario.values)
    predictions = None
    history: History = ()
    for index in order:
        arrival = (index, scenario.value_at(index))
        if alg.decide(history, arrival, n, predictions) is Action.ACCEPT:
            return arrival[1]
        history += (arrival,)
    return None


def exact_expected_ratio(alg: OnlineAlgorithm, family: PriorFamily) -> Fraction:
    """Exact mixture expected ratio by enumerating rows times orders."""
    if family.n > MAX_ENUMERATION_N:
        raise EnumerationGuardError(
            f"n = {family.n} requires {family.n}! order enumeration; "
            f"use monte_carlo_estimate beyond n = {MAX_ENUMERATION_N}"
        )
    orders = list(itertools.permutations(range(1, family.n + 1)))
    total = Fraction(0)
    for scenario, probability in family.items():
        if probability == 0:
            continue
        row_total = Fraction(0)
        for order in orders:
            accepted = run_algorithm(alg, scenario, order)
            row_total += competitive_ratio(accepted, scenario)
        total += probability * row_total / len(orders)
    return total


def algorithm_to_policy(alg: OnlineAlgorithm, family: PriorFamily) -> Policy:
    """Tabulate the streaming rule as an explicit state policy over the
    family's reachable states (the bridge to evaluate_policy)."""
    actions = {}
    for state in reachable_states(family):
        actions[state] = alg.decide(state.observed, state.current, family.n, None)
    return Policy(actions)


def evaluate_algorithm(alg: OnlineAlgorithm, family: PriorFamily) -> SolveReport:
    """Per-row evaluation of a streaming rule via its induced state policy."""
    return evaluate_policy(algorithm_to_policy(alg, family), family)


# ---------------------------------------------------------------------------
# Monte Carlo.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonteCarloEstimate:
    """Seeded estimate; the mean is held exactly and rendered on demand.

    Reruns with the same seed and trial count reproduce mean_exact (and
    hence the rendered mean) bit for bit.
    """

    mean_exact: Fraction
    std_error: float
    trials: int
    seed: int
    metric: str

    @property
    def mean(self) -> str:
        return decimal_str(self.mean_exact, 12)

    def to_dict(self, digits: int = 12) -> dict:
        return {
            "mean": decimal_str(self.mean_exact, digits),
            "std_error": f"{self.std_error:.{digits}g}",
            "trials": self.trials,
            "seed": self.seed,
            "metric": self.metric,
        }


# Each trial owns a counter block: trial i uses the 256-bit Philox counter
# starting at i * 2^128, leaving 2^128 draws of in-trial headroom, so the
# streams never overlap and trial order or parallel scheduling cannot
# change any draw.
_TRIAL_STRIDE = 1 << 128


def _trial_generator(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed, counter=trial * _TRIAL_STRIDE))


def monte_carlo_estimate(
    alg: OnlineAlgorithm,
    family: PriorFamily,
    trials: int,
    seed: int,
    metric: str = "ratio",
) -> MonteCarloEstimate:
    """Sample (row, arrival order) pairs i.i.d. and average the metric.

    metric "ratio" is the competitive ratio of the accepted value;
    "success" is the indicator of having accepted a maximum-value
    candidate.  Row selection compares a uniform draw against exact
    cumulative probabilities, and the running mean is accumulated in
    exact arithmetic, so results are reproducible across platforms.
    """
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")
    if metric not in ("ratio", "success"):
        raise ParameterError(f"metric must be 'ratio' or 'success', got {metric!r}")
    scenarios = [(s, p) for s, p in family.items() if p > 0]
    cumulative: list[Fraction] = []
    running = Fraction(0)
    for _, probability in scenarios:
        running += probability
        cumulative.append(running)
    n = family.n
    predictions = family.prediction().values
    multi_row = len(scenarios) > 1

    # Draw all randomness first, one substream per trial: an optional row
    # uniform (exact comparison against the cumulative probabilities),
    # then the arrival order.
    rows = np.zeros(trials, dtype=np.int64)
    orders = np.empty((trials, n), dtype=np.int64)
    for trial in range(trials):
        rng = _trial_generator(seed, trial)
        if multi_row:
            u = Fraction(float(rng.random()))
            rows[trial] = next(i for i, c in enumerate(cumulative) if u < c)
        orders[trial] = rng.permutation(n)

    total = Fraction(0)
    total_sq = Fraction(0)
    if alg.run_batch is not None:
        # The outcome depends only on the scenario and the accepted
        # candidate, so exact totals follow from acceptance counts.
        for row, (scenario, _) in enumerate(scenarios):
            block = orders[rows == row]
            if block.shape[0] == 0:
                continue
            accepted = alg.run_batch(block, scenario, n, predictions)
            counts = np.bincount(accepted[accepted >= 0], minlength=n)
            for candidate, count in enumerate(counts.tolist()):
                if count == 0:
                    continue
                outcome = _metric_value(
                    metric, scenario.values[candidate], scenario
                )
                total += count * outcome
                total_sq += count * outcome * outcome
    else:
        use_session = alg.session is not None
        for trial in range(trials):
            scenario = scenarios[rows[trial]][0]
            accepted_value: Fraction | None = None
            if use_session:
                step = alg.session(n, predictions)
                for raw in orders[trial].tolist():
                    value = scenario.values[raw]
                    if step(raw + 1, value) is Action.ACCEPT:
                        accepted_value = value
                        break
            else:
                history: History = ()
                for raw in orders[trial].tolist():
                    arrival = (raw + 1, scenario.values[raw])
                    if alg.decide(history, arrival, n, predictions) is Action.ACCEPT:
                        accepted_value = arrival[1]
                        break
                    history += (arrival,)
            outcome = _metric_value(metric, accepted_value, scenario)
            total += outcome
            total_sq += outcome * outcome

    mean = total / trials
    if trials > 1:
        variance = (total_sq - trials * mean * mean) / (trials - 1)
        std_error = math.sqrt(max(0.0, float(variance)) / trials)
    else:
        std_error = 0.0
    return MonteCarloEstimate(
        mean_exact=mean,
        std_error=std_error,
        trials=trials,
        seed=seed,
        metric=metric,
    )


def _metric_value(
    metric: str, accepted_value: Fraction | None, scenario: Scenario
) -> Fraction:
    if metric == "ratio":
        return competitive_ratio(accepted_value, scenario)
    return Fraction(1) if accepted_value == scenario_max(scenario) else Fraction(0)


def dynkin_success_probability(n: int) -> Fraction:
    """Exact probability that the classic rule picks the maximum when all
    n values are distinct: (l/n) * sum_{i=l+1}^{n} 1/(i-1) with
    l = floor(n/e); for l = 0 the rule accepts the first arrival, which
    is the maximum with probability 1/n.
    """
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    cutoff = floor_n_over_e(n)
    if cutoff == 0:
        return Fraction(1, n)
    return Fraction(cutoff, n) * sum(
        (Fraction(1, i - 1) for i in range(cutoff + 1, n + 1)), Fraction(0)
    )
