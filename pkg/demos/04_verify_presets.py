"""Run the full verification pipeline on every registered preset.

verify_theorem builds the family, solves it under the consistency
constraint, cross-checks the solver against the closed form, and settles
each inequality through certified enclosures.  One registered preset
intentionally fails its budget inequality; the report says so instead of
glossing over it.
"""

from secretary_lab import decimal_str, known_presets, verify_theorem

for name in known_presets():
    report = verify_theorem(preset=name)
    p = report.params
    print(f"preset {name}: eps = {p.mix_eps}, s = {p.s}, k = {p.k} ({p.row_count} rows)")
    print(f"  dp optimum      {decimal_str(report.dp_optimum, 10)}")
    print(f"  alpha           {decimal_str(report.alpha, 10)}")
    print(f"  vs 1/e          {report.verdict_vs_inv_e.value}")
    print(f"  budget holds    {report.preset_inequality_holds}")
    print(f"  worst row       {report.worst_row[0]}")
    print()

print("corrected-76-78 certifies a constrained optimum below 1/e by more")
print("than 8e-3, while paper-19-20 lands above 1/e: at (19, 20) the")
print("budget inequality simply does not hold, and the report flags it.")
