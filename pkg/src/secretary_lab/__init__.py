"""Exact verification lab for the secretary problem with predictions.

The package answers one family of questions with certified arithmetic:
how well can a stopping rule that is locked to announced predictions do
against an adversarial prior over value scenarios?  It provides the
adversarial family constructor, an exact backward-induction solver over
information states, closed-form bounds with rational enclosures of the
constants involving e, classic baselines with exact and Monte Carlo
scoring, and a CLI that ties the pieces into reproducible artifacts.
"""

from .baselines import (
    MonteCarloEstimate,
    OnlineAlgorithm,
    algorithm_to_policy,
    dynkin_policy,
    dynkin_success_probability,
    evaluate_algorithm,
    exact_expected_ratio,
    monte_carlo_estimate,
    prediction_argmax_policy,
    run_algorithm,
)
from .bounds import (
    TheoremReport,
    alpha_value,
    beta_bounds,
    known_presets,
    load_preset,
    oracle_optimum,
    threshold_value,
    ub_display,
    verify_theorem,
)
from .construction import (
    ConstructionParams,
    build_hard_family,
    confusion_pair_rows,
    first_appearance_row,
    render_family_csv,
    render_family_markdown,
    row_exponents,
    swap_partner_row,
)
from .errors import (
    DegenerateInstanceError,
    EnumerationGuardError,
    InvalidFamilyError,
    MissingStateError,
    NonpositiveBudgetError,
    ParameterError,
    PrecisionExhaustedError,
    SecretaryLabError,
    UndefinedErrorMeasureError,
    UnknownPresetError,
    UnreachableStateError,
)
from .exact import (
    Comparison,
    Enclosure,
    compare_to_inv_e,
    decimal_str,
    e_enclosure,
    floor_n_over_e,
    format_value,
    inv_e_enclosure,
    parse_value,
    refine_until_decisive,
)
from .instances import (
    PriorFamily,
    Scenario,
    ValidationReport,
    competitive_ratio,
    dump_family,
    load_family,
    prediction_error,
    render_family_json,
    scenario_max,
    validate_family,
)
from .policy import (
    Action,
    InformationState,
    Policy,
    SolveReport,
    brute_force_optimum,
    consistent_actions,
    evaluate_policy,
    is_consistent,
    posterior,
    random_policy,
    reachable_states,
    solve_optimal,
)

__version__ = "1.0.0"

__all__ = [
    "Action",
    "Comparison",
    "ConstructionParams",
    "DegenerateInstanceError",
    "Enclosure",
    "EnumerationGuardError",
    "InformationState",
    "InvalidFamilyError",
    "MissingStateError",
    "MonteCarloEstimate",
    "NonpositiveBudgetError",
    "OnlineAlgorithm",
    "ParameterError",
    "Policy",
    "PrecisionExhaustedError",
    "PriorFamily",
    "Scenario",
    "SecretaryLabError",
    "SolveReport",
    "TheoremReport",
    "UndefinedErrorMeasureError",
    "UnknownPresetError",
    "UnreachableStateError",
    "ValidationReport",
    "algorithm_to_policy",
    "alpha_value",
    "beta_bounds",
    "brute_force_optimum",
    "build_hard_family",
    "compare_to_inv_e",
    "competitive_ratio",
    "confusion_pair_rows",
    "consistent_actions",
    "decimal_str",
    "dump_family",
    "dynkin_policy",
    "dynkin_success_probability",
    "e_enclosure",
    "evaluate_algorithm",
    "evaluate_policy",
    "exact_expected_ratio",
    "first_appearance_row",
    "floor_n_over_e",
    "format_value",
    "inv_e_enclosure",
    "is_consistent",
    "known_presets",
    "load_family",
    "load_preset",
    "monte_carlo_estimate",
    "oracle_optimum",
    "parse_value",
    "posterior",
    "prediction_argmax_policy",
    "prediction_error",
    "random_policy",
    "reachable_states",
    "refine_until_decisive",
    "render_family_csv",
    "render_family_json",
    "render_family_markdown",
    "row_exponents",
    "run_algorithm",
    "scenario_max",
    "solve_optimal",
    "swap_partner_row",
    "threshold_value",
    "ub_display",
    "validate_family",
    "verify_theorem",
]
