import decimal
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from secretary_lab import (
    Comparison,
    Enclosure,
    PrecisionExhaustedError,
    compare_to_inv_e,
    decimal_str,
    e_enclosure,
    floor_n_over_e,
    format_value,
    inv_e_enclosure,
    parse_value,
    refine_until_decisive,
)
from secretary_lab.exact import default_digits, format_value_with_base


def _decimal_e(digits: int) -> decimal.Decimal:
    # independent route: the decimal module's correctly rounded exp
    with decimal.localcontext() as ctx:
        ctx.prec = digits + 10
        return decimal.Decimal(1).exp()


# ---------------------------------------------------------------------------
# Value grammar.
# ---------------------------------------------------------------------------

@pytest.mark.parametrize(
    "text,expected",
    [
        ("3/4", Fraction(3, 4)),
        ("7", Fraction(7)),
        ("-2/5", Fraction(-2, 5)),
        ("0", Fraction(0)),
        ("  5/2 ", Fraction(5, 2)),
    ],
)
def test_parse_plain_forms(text, expected):
    assert parse_value(text) == expected


def test_parse_power_form_needs_base():
    assert parse_value("s^3", base=Fraction(5)) == Fraction(125)
    assert parse_value("s^0", base=Fraction(5)) == Fraction(1)
    with pytest.raises(ValueError):
        parse_value("s^3")


def test_parse_rejects_garbage():
    for bad in ("", "one", "3/", "/4", "1.5", "s^"):
        with pytest.raises(ValueError):
            parse_value(bad, base=Fraction(2))


@given(
    st.fractions(
        min_value=Fraction(-10**9), max_value=Fraction(10**9), max_denominator=10**9
    )
)
def test_format_parse_round_trip(x):
    assert parse_value(format_value(x)) == x


@given(st.integers(min_value=0, max_value=60))
def test_power_form_round_trip(exponent):
    base = Fraction(19)
    rendered = format_value_with_base(base**exponent, base)
    assert parse_value(rendered, base=base) == base**exponent
    if exponent >= 1:
        assert rendered == f"s^{exponent}"


def test_power_form_falls_back_without_base():
    assert format_value_with_base(Fraction(25), None) == "25"
    assert format_value_with_base(Fraction(3, 7), Fraction(5)) == "3/7"


# ---------------------------------------------------------------------------
# Decimal rendering.
# ---------------------------------------------------------------------------

@pytest.mark.parametrize(
    "x,digits,expected",
    [
        (Fraction(1, 3), 12, "0.333333333333"),
        (Fraction(2, 3), 12, "0.666666666667"),
        (Fraction(1, 2), 0, "1"),
        (Fraction(5, 1000), 2, "0.01"),
        (Fraction(-1, 8), 2, "-0.13"),
        (Fraction(-1, 10**6), 2, "0.00"),
        (Fraction(1703, 3125), 5, "0.54496"),
        (Fraction(3), 4, "3.0000"),
    ],
)
def test_decimal_str(x, digits, expected):
    assert decimal_str(x, digits) == expected


def test_decimal_str_rejects_negative_digits():
    with pytest.raises(ValueError):
        decimal_str(Fraction(1), -1)


@given(
    st.fractions(min_value=Fraction(0), max_value=Fraction(10), max_denominator=10**6),
    st.integers(min_value=1, max_value=20),
)
def test_decimal_str_error_bound(x, digits):
    rendered = decimal_str(x, digits)
    assert abs(Fraction(rendered) - x) <= Fraction(1, 2 * 10**digits)


# ---------------------------------------------------------------------------
# Enclosures of e and 1/e.
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("digits", [5, 20, 50, 120])
def test_e_enclosure_brackets_reference(digits):
    enclosure = e_enclosure(digits)
    reference = Fraction(str(_decimal_e(digits + 5)))
    assert enclosure.lower < reference < enclosure.upper
    assert enclosure.width < Fraction(1, 10**digits)


@pytest.mark.parametrize("digits", [5, 20, 50])
def test_inv_e_enclosure_brackets_reference(digits):
    enclosure = inv_e_enclosure(digits)
    reference = 1 / Fraction(str(_decimal_e(digits + 10)))
    assert enclosure.lower < reference < enclosure.upper
    assert enclosure.width < Fraction(1, 10**digits)


def test_enclosure_compare_semantics():
    box = Enclosure(Fraction(1, 3), Fraction(1, 2), digits=5)
    assert box.compare(Fraction(1, 3)) is Comparison.LESS
    assert box.compare(Fraction(2, 5)) is Comparison.INDETERMINATE
    assert box.compare(Fraction(1, 2)) is Comparison.GREATER
    with pytest.raises(ValueError):
        Enclosure(Fraction(1), Fraction(1), digits=5)


def test_compare_to_inv_e_known_sides():
    assert compare_to_inv_e(Fraction(3679, 10000)) is Comparison.GREATER
    assert compare_to_inv_e(Fraction(3678, 10000)) is Comparison.LESS
    assert compare_to_inv_e(Fraction(1, 3)) is Comparison.LESS
    assert compare_to_inv_e(Fraction(2, 5)) is Comparison.GREATER


def test_compare_refines_from_coarse_start():
    # 0.36787944 agrees with 1/e to 8 places; a 5-digit start must refine
    assert compare_to_inv_e(
        Fraction(36787944, 10**8), start_digits=5
    ) is Comparison.LESS


def test_refinement_gives_up_at_cap():
    tight = inv_e_enclosure(400)
    midpoint = (tight.lower + tight.upper) / 2
    with pytest.raises(PrecisionExhaustedError):
        compare_to_inv_e(midpoint, start_digits=50, max_digits=100)


def test_refine_until_decisive_on_custom_producer():
    verdict = refine_until_decisive(e_enclosure, Fraction(27, 10), start_digits=2)
    assert verdict is Comparison.LESS
    verdict = refine_until_decisive(e_enclosure, Fraction(2719, 1000), start_digits=2)
    assert verdict is Comparison.GREATER


# ---------------------------------------------------------------------------
# floor(n/e).
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("n,expected", [(1, 0), (2, 0), (3, 1), (100, 36)])
def test_floor_n_over_e_anchors(n, expected):
    assert floor_n_over_e(n) == expected


def test_floor_n_over_e_matches_decimal_reference():
    with decimal.localcontext() as ctx:
        ctx.prec = 60
        e_ref = decimal.Decimal(1).exp()
        for n in range(1, 500):
            quotient = decimal.Decimal(n) / e_ref
            assert floor_n_over_e(n) == int(quotient)


def test_floor_n_over_e_rejects_nonpositive():
    with pytest.raises(ValueError):
        floor_n_over_e(0)


# ---------------------------------------------------------------------------
# Precision seed.
# ---------------------------------------------------------------------------

def test_default_digits_env_override(monkeypatch):
    monkeypatch.delenv("SECRETARY_LAB_PRECISION", raising=False)
    assert default_digits() == 50
    monkeypatch.setenv("SECRETARY_LAB_PRECISION", "80")
    assert default_digits() == 80
    monkeypatch.setenv("SECRETARY_LAB_PRECISION", "0")
    with pytest.raises(ValueError):
        default_digits()
