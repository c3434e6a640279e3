"""Instance model: value scenarios, prior families over them, and the
elementary competitive-analysis measures.

A scenario is one assignment of nonnegative values to the n candidates; a
prior family is a finite mixture of scenarios with exact probabilities,
one of which is announced as the prediction vector.  Candidate indices
are 1-based throughout the public API.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import DegenerateInstanceError, UndefinedErrorMeasureError
from .exact import format_value, format_value_with_base, parse_value


@dataclass(frozen=True)
class Scenario:
    """One row of a prior family: an id plus the candidate values.

    Values must be nonnegative rationals; ``values[i]`` is candidate
    ``i + 1`` (the API uses 1-based candidate indices, see ``value_at``).
    """

    id: int
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.id < 1:
            raise ValueError("scenario id must be a positive integer")
        if not self.values:
            raise ValueError("scenario needs at least one value")
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))
        if any(v < 0 for v in self.values):
            raise ValueError("scenario values must be >= 0")

    def value_at(self, index: int) -> Fraction:
        """Value of candidate ``index`` (1-based)."""
        if not 1 <= index <= len(self.values):
            raise ValueError(f"candidate index {index} out of range 1..{len(self.values)}")
        return self.values[index - 1]


@dataclass(frozen=True)
class PriorFamily:
    """Scenarios with exact mixture probabilities and a designated
    prediction scenario.

    The constructor only checks shapes that would make the object
    unusable; the full invariant list (probability mass, unique ids,
    uniform lengths, prediction id present) is reported, not raised, by
    ``validate_family`` so that broken inputs can be diagnosed.
    """

    n: int
    scenarios: tuple[Scenario, ...]
    probabilities: tuple[Fraction, ...]
    prediction_id: int
    base: Fraction | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "scenarios", tuple(self.scenarios))
        object.__setattr__(
            self, "probabilities", tuple(Fraction(p) for p in self.probabilities)
        )
        if self.base is not None:
            object.__setattr__(self, "base", Fraction(self.base))
        if len(self.scenarios) != len(self.probabilities):
            raise ValueError("scenarios and probabilities must have equal length")
        if not self.scenarios:
            raise ValueError("family needs at least one scenario")

    def scenario_by_id(self, scenario_id: int) -> Scenario:
        for scenario in self.scenarios:
            if scenario.id == scenario_id:
                return scenario
        raise KeyError(f"no scenario with id {scenario_id}")

    def prediction(self) -> Scenario:
        """The scenario whose values are announced as predictions."""
        return self.scenario_by_id(self.prediction_id)

    def probability_of(self, scenario_id: int) -> Fraction:
        for scenario, probability in zip(self.scenarios, self.probabilities):
            if scenario.id == scenario_id:
                return probability
        raise KeyError(f"no scenario with id {scenario_id}")

    def items(self):
        """Pairs (scenario, probability) in declaration order."""
        return tuple(zip(self.scenarios, self.probabilities))


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validate_family: ok flag plus human-readable violations."""

    valid: bool
    violations: tuple[str, ...]


# ---------------------------------------------------------------------------
# Elementary measures.
# ---------------------------------------------------------------------------

def scenario_max(scenario: Scenario) -> Fraction:
    """Exact maximum candidate value of the scenario."""
    return max(scenario.values)


def competitive_ratio(accepted_value: Fraction | None, scenario: Scenario) -> Fraction:
    """Accepted value divided by the scenario maximum; 0 when nothing was
    accepted.

    The accepted value must be one of the scenario's values, and the
    scenario must have a positive maximum for the ratio to be defined.
    """
    best = scenario_max(scenario)
    if best == 0:
        raise DegenerateInstanceError(
            f"scenario {scenario.id} is all-zero; competitive ratio undefined"
        )
    if accepted_value is None:
        return Fraction(0)
    accepted_value = Fraction(accepted_value)
    if accepted_value not in scenario.values:
        raise ValueError(
            f"accepted value {accepted_value} is not a value of scenario {scenario.id}"
        )
    return accepted_value / best


def prediction_error(values, predictions) -> Fraction:
    """Maximum multiplicative error max_i |1 - predicted_i / true_i|.

    Undefined (raises) when any true value is zero.
    """
    values = [Fraction(v) for v in values]
    predictions = [Fraction(p) for p in predictions]
    if len(values) != len(predictions):
        raise ValueError("values and predictions must have equal length")
    if any(v == 0 for v in values):
        raise UndefinedErrorMeasureError(
            "prediction error undefined: some true value is 0"
        )
    return max(abs(1 - p / v) for v, p in zip(values, predictions))


def validate_family(family: PriorFamily) -> ValidationReport:
    """Check every family invariant and report violations instead of raising."""
    violations: list[str] = []
    if family.n < 1:
        violations.append(f"candidate count n = {family.n} must be >= 1")
    ids = [scenario.id for scenario in family.scenarios]
    if len(set(ids)) != len(ids):
        violations.append("ids not unique")
    for scenario in family.scenarios:
        if len(scenario.values) != family.n:
            violations.append(
                f"scenario {scenario.id} has {len(scenario.values)} values, expected n = {family.n}"
            )
    for scenario, probability in family.items():
        if probability < 0:
            violations.append(f"scenario {scenario.id} has negative probability {probability}")
    mass = sum(family.probabilities, Fraction(0))
    if mass != 1:
        violations.append(f"mass != 1 (probabilities sum to {mass})")
    if family.prediction_id not in ids:
        violations.append(f"prediction_id {family.prediction_id} refers to no scenario")
    return ValidationReport(valid=not violations, violations=tuple(violations))


# ---------------------------------------------------------------------------
# File format: UTF-8 JSON with all values in the text grammar.
# ---------------------------------------------------------------------------

def family_to_dict(family: PriorFamily) -> dict:
    base = family.base
    payload: dict = {"n": family.n}
    if base is not None:
        payload["base_s"] = format_value(base)
    payload["scenarios"] = [
        {
            "id": scenario.id,
            "values": [format_value_with_base(v, base) for v in scenario.values],
            "probability": format_value(probability),
        }
        for scenario, probability in family.items()
    ]
    payload["prediction_id"] = family.prediction_id
    return payload


def family_from_dict(payload: dict) -> PriorFamily:
    base = None
    if payload.get("base_s") is not None:
        base = parse_value(payload["base_s"])
    scenarios = []
    probabilities = []
    for entry in payload["scenarios"]:
        scenarios.append(
            Scenario(
                id=int(entry["id"]),
                values=tuple(parse_value(v, base) for v in entry["values"]),
            )
        )
        probabilities.append(parse_value(entry["probability"], base))
    return PriorFamily(
        n=int(payload["n"]),
        scenarios=tuple(scenarios),
        probabilities=tuple(probabilities),
        prediction_id=int(payload["prediction_id"]),
        base=base,
    )


def dump_family(family: PriorFamily, path: str | Path) -> None:
    Path(path).write_text(render_family_json(family), encoding="utf-8")


def render_family_json(family: PriorFamily) -> str:
    return json.dumps(family_to_dict(family), indent=2, sort_keys=False) + "\n"


def load_family(path: str | Path) -> PriorFamily:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return family_from_dict(payload)
