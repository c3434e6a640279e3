"""Solve a family exactly and look inside the optimal policy.

The solver walks the information-state tree backward, maximizing the
posterior-expected competitive ratio at every decision.  With the
consistency constraint on, the policy must take the predicted best
candidate whenever the predictions are exactly right; that obligation
costs real performance, which is the whole point of the construction.
"""

from fractions import Fraction

from secretary_lab import (
    ConstructionParams,
    InformationState,
    build_hard_family,
    decimal_str,
    posterior,
    solve_optimal,
)

family = build_hard_family(ConstructionParams(Fraction(1, 10), Fraction(5), 4))

constrained = solve_optimal(family, constrained=True)
free = solve_optimal(family, constrained=False)

print("expected competitive ratio, anchor family (eps=1/10, s=5, k=4):")
print(f"  constrained   {constrained.optimum}  = {decimal_str(constrained.optimum, 6)}")
print(f"  unconstrained {free.optimum}  = {decimal_str(free.optimum, 6)}")
print()

print("per-row conditional ratios of the constrained policy:")
for row, ratio in sorted(constrained.per_row.items()):
    marker = "  <- worst" if row == constrained.worst_row[0] else ""
    print(f"  row {row}: {str(ratio):>10} = {decimal_str(ratio, 6)}{marker}")
print()

# The first-arrival posterior after seeing X_2 = s^3: a clean 50/50 split
# between two rows whose maxima differ by a factor of s.
state = InformationState((), (2, Fraction(5) ** 3))
masses = posterior(family, state)
print(f"posterior after first arrival {state.serialize()}:")
for row, mass in masses.items():
    if mass:
        print(f"  row {row}: {mass}")
print()
print(f"the constrained policy there plays: {constrained.policy.action_for(state).value}")
