"""Classic baselines: exact where feasible, seeded Monte Carlo beyond.

Small horizons are scored by full order enumeration.  At n = 100 the
wait-then-pounce rule is estimated with reproducible Philox substreams;
the same seed gives the same mean to the last bit, on any machine.
"""

from fractions import Fraction

from secretary_lab import (
    ConstructionParams,
    PriorFamily,
    Scenario,
    build_hard_family,
    decimal_str,
    dynkin_policy,
    dynkin_success_probability,
    exact_expected_ratio,
    monte_carlo_estimate,
    prediction_argmax_policy,
)

print("exact success probability of the classic threshold rule:")
for n in (3, 5, 10, 50, 100):
    p = dynkin_success_probability(n)
    print(f"  n = {n:>3}: {decimal_str(p, 8)}")
print()

n = 100
family = PriorFamily(
    n=n,
    scenarios=(Scenario(1, tuple(Fraction(i) for i in range(1, n + 1))),),
    probabilities=(Fraction(1),),
    prediction_id=1,
)
estimate = monte_carlo_estimate(
    dynkin_policy(n), family, trials=100_000, seed=0, metric="success"
)
print("Monte Carlo at n = 100, 100000 trials, seed 0:")
print(f"  mean {estimate.mean}  (std error {estimate.std_error:.6f})")
print(f"  exact value {decimal_str(dynkin_success_probability(n), 12)}")
print()

# On the hard family, trusting the predictions outright is poor: the
# prediction row only carries a small slice of the prior.
anchor = build_hard_family(ConstructionParams(Fraction(1, 10), Fraction(5), 4))
trusting = prediction_argmax_policy(anchor.prediction().values)
ratio = exact_expected_ratio(trusting, anchor)
print(f"trust-the-predictions rule on the anchor family: {ratio} = {decimal_str(ratio, 6)}")
ratio = exact_expected_ratio(dynkin_policy(3), anchor)
print(f"classic rule on the anchor family:               {ratio} = {decimal_str(ratio, 6)}")
