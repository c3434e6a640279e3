"""Exact rational values, the text grammar for them, and certified
comparisons against the irrational constant e.

All quantities in the pipeline are `fractions.Fraction` instances; floats
appear only when a report asks for a decimal rendering.  Comparisons
against e (and 1/e) go through rational enclosures produced from the
series e = sum 1/i! together with a strict tail bound, refined on demand
until the comparison is decisive.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import PrecisionExhaustedError

DEFAULT_DIGITS = 50
MAX_DIGITS = 10_000
PRECISION_ENV_VAR = "SECRETARY_LAB_PRECISION"


def default_digits() -> int:
    """Seed precision (decimal digits) for enclosures, overridable via env."""
    raw = os.environ.get(PRECISION_ENV_VAR)
    if raw is None:
        return DEFAULT_DIGITS
    digits = int(raw)
    if digits < 1:
        raise ValueError(f"{PRECISION_ENV_VAR} must be a positive integer, got {raw!r}")
    return digits


# ---------------------------------------------------------------------------
# Value grammar: "p/q" (reduced rational, q > 0), "p" (integer), or "s^e"
# (integer exponent resolved against a family-level rational base).
# ---------------------------------------------------------------------------

def parse_value(text: str, base: Fraction | None = None) -> Fraction:
    """Parse a value string into an exact rational.

    ``base`` supplies the family-level constant for the "s^e" form; a
    power form without a base is an error.
    """
    text = text.strip()
    if text.startswith("s^"):
        if base is None:
            raise ValueError(f"power form {text!r} needs a family base")
        exponent = int(text[2:])
        return Fraction(base) ** exponent
    if "/" in text:
        num_text, den_text = text.split("/", 1)
        return Fraction(int(num_text), int(den_text))
    return Fraction(int(text))


def format_value(x: Fraction) -> str:
    """Render ``x`` in the grammar: "p" for integers, else "p/q"."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_value_with_base(x: Fraction, base: Fraction | None) -> str:
    """Render ``x`` as "s^e" when it is an exact power of ``base`` (e >= 1),
    otherwise fall back to the plain rational form."""
    x = Fraction(x)
    if base is not None and base > 1 and x > 0:
        exponent = _exact_log(x, Fraction(base))
        if exponent is not None and exponent >= 1:
            return f"s^{exponent}"
    return format_value(x)


def _exact_log(x: Fraction, base: Fraction) -> int | None:
    """Integer e with base**e == x exactly, or None."""
    if x == 1:
        return 0
    # bit-length estimate keeps this exact without float overflow on huge powers
    log2_base = math.log2(base.numerator) - math.log2(base.denominator)
    if log2_base <= 0:
        return None
    approx = (x.numerator.bit_length() - x.denominator.bit_length()) / log2_base
    for exponent in range(int(approx) - 2, int(approx) + 3):
        if base ** exponent == x:
            return exponent
    return None


def decimal_str(x: Fraction, digits: int = 12) -> str:
    """Fixed-point decimal rendering of an exact rational.

    Rounds half away from zero; the result always carries exactly
    ``digits`` fractional digits so renderings are byte-stable.
    """
    if digits < 0:
        raise ValueError("digits must be >= 0")
    x = Fraction(x)
    scale = 10 ** digits
    scaled_num = abs(x.numerator) * scale
    quotient, remainder = divmod(scaled_num, x.denominator)
    if 2 * remainder >= x.denominator:
        quotient += 1
    sign = "-" if x < 0 and quotient > 0 else ""
    if digits == 0:
        return f"{sign}{quotient}"
    integer_part, frac_part = divmod(quotient, scale)
    return f"{sign}{integer_part}.{frac_part:0{digits}d}"


# ---------------------------------------------------------------------------
# Certified enclosures of e and 1/e.
# ---------------------------------------------------------------------------

class Comparison(enum.Enum):
    """Position of a rational relative to an enclosed irrational."""

    LESS = "less"
    GREATER = "greater"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class Enclosure:
    """Open rational interval certified to contain one irrational constant.

    ``digits`` records the precision level the interval was built for and
    is the hint passed back to the producer when a comparison needs a
    tighter interval.
    """

    lower: Fraction
    upper: Fraction
    digits: int

    def __post_init__(self) -> None:
        if not self.lower < self.upper:
            raise ValueError("enclosure requires lower < upper")

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    def compare(self, x: Fraction) -> Comparison:
        """Decisive position of ``x`` versus the enclosed constant.

        The constant lies strictly inside the interval, so x <= lower
        already certifies x < constant (and symmetrically for upper).
        """
        x = Fraction(x)
        if x <= self.lower:
            return Comparison.LESS
        if x >= self.upper:
            return Comparison.GREATER
        return Comparison.INDETERMINATE


@lru_cache(maxsize=None)
def _e_series_state(digits: int) -> tuple[Fraction, Fraction]:
    """Partial sum of sum 1/i! and a strict rational tail bound, with the
    tail bound below 10**-digits.

    Uses sum_{i>m} 1/i! < (m+2) / ((m+1)! * (m+1)), strict for all m >= 1.
    """
    target = Fraction(1, 10 ** digits)
    m = 1
    factorial_m = 1  # m!
    partial_numerator = 2  # sum_{i<=m} m!/i!  (a_m = a_{m-1}*m + 1, a_0 = 1)
    while True:
        tail = Fraction(m + 2, factorial_m * (m + 1) * (m + 1))
        if tail < target:
            return Fraction(partial_numerator, factorial_m), tail
        m += 1
        factorial_m *= m
        partial_numerator = partial_numerator * m + 1


def e_enclosure(digits: int | None = None) -> Enclosure:
    """Rational enclosure of e with width below 10**-digits."""
    if digits is None:
        digits = default_digits()
    partial, tail = _e_series_state(digits)
    return Enclosure(lower=partial, upper=partial + tail, digits=digits)


def inv_e_enclosure(digits: int | None = None) -> Enclosure:
    """Rational enclosure of 1/e, inverted from the e enclosure."""
    outer = e_enclosure(digits)
    return Enclosure(
        lower=1 / outer.upper, upper=1 / outer.lower, digits=outer.digits
    )


def refine_until_decisive(
    produce,
    x: Fraction,
    start_digits: int | None = None,
    max_digits: int = MAX_DIGITS,
) -> Comparison:
    """Compare ``x`` to the constant enclosed by ``produce(digits)``,
    doubling the precision until the comparison resolves.

    Raises PrecisionExhaustedError past ``max_digits``; for a rational x
    and an irrational constant that can only happen with a too-small cap.
    """
    digits = start_digits if start_digits is not None else default_digits()
    while True:
        verdict = produce(digits).compare(x)
        if verdict is not Comparison.INDETERMINATE:
            return verdict
        if digits >= max_digits:
            raise PrecisionExhaustedError(
                f"comparison of {x} still indeterminate at {digits} digits"
            )
        digits = min(2 * digits, max_digits)


def compare_to_inv_e(
    x: Fraction,
    start_digits: int | None = None,
    max_digits: int = MAX_DIGITS,
) -> Comparison:
    """Decisive comparison of an exact rational against 1/e.

    Always returns LESS or GREATER: equality is impossible and the
    enclosure is refined automatically until one side is certified.
    """
    return refine_until_decisive(inv_e_enclosure, Fraction(x), start_digits, max_digits)


def floor_n_over_e(n: int, start_digits: int | None = None) -> int:
    """floor(n/e), certified through the e enclosure.

    n/e is irrational for every positive integer n, so refinement always
    terminates with both interval ends in the same unit interval.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    digits = start_digits if start_digits is not None else default_digits()
    while True:
        outer = e_enclosure(digits)
        low = Fraction(n) / outer.upper
        high = Fraction(n) / outer.lower
        if low.__floor__() == high.__floor__():
            return low.__floor__()
        if digits >= MAX_DIGITS:
            raise PrecisionExhaustedError(f"floor({n}/e) undecided at {digits} digits")
        digits = min(2 * digits, MAX_DIGITS)
