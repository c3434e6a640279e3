"""Push the construction toward its limit value of 1/3.

As eps shrinks and s, k grow, the constrained optimum of the hard family
drops toward 1/3 from above while alpha chases it from above as well;
both cross below 1/e early along the way.  This is the quantitative
content behind the impossibility: consistency pins one third of the
probability, and everything else can be made worthless.
"""

from fractions import Fraction

from secretary_lab import (
    ConstructionParams,
    alpha_value,
    build_hard_family,
    compare_to_inv_e,
    decimal_str,
    solve_optimal,
)

points = [
    (Fraction(1, 10), 5, 4),
    (Fraction(1, 20), 10, 10),
    (Fraction(1, 50), 50, 50),
    (Fraction(1, 100), 100, 100),
    (Fraction(1, 100), 400, 400),
    (Fraction(1, 1000), 1000, 600),
]

print(f"{'eps':>8} {'s':>6} {'k':>5} {'dp optimum':>14} {'alpha':>14}  vs 1/e")
for eps, s, k in points:
    params = ConstructionParams(eps, Fraction(s), k)
    solved = solve_optimal(build_hard_family(params), constrained=True)
    alpha = alpha_value(eps, Fraction(s), k)
    print(
        f"{str(eps):>8} {s:>6} {k:>5} "
        f"{decimal_str(solved.optimum, 10):>14} {decimal_str(alpha, 10):>14}  "
        f"{compare_to_inv_e(solved.optimum).value}"
    )

print()
print("1/3 = 0.3333333333...; the dp column approaches it from above.")
