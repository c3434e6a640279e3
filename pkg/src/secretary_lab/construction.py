"""Generator for the hard prior family against 1-consistent stopping rules.

The family has 2k-1 rows over n >= 3 candidates.  Row 1 is the announced
prediction (s, 1, ..., 1) with mixture probability ``mix_eps``; the
remaining rows split the rest of the mass evenly and arrange powers of s
in columns 2 and 3 so that every power s^i with 3 <= i <= k appears twice
per column, making the two matching rows indistinguishable when that
column arrives first.  Columns beyond the third are 1 in every row, which
pads the construction to larger n without changing the analysis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .errors import ParameterError
from .exact import format_value, format_value_with_base
from .instances import PriorFamily, Scenario

Column = Literal[2, 3]


@dataclass(frozen=True)
class ConstructionParams:
    """Parameters (mix_eps, s, k, n) of the hard family.

    k must be even (the swap-pair pattern is only defined for even k) and
    at least 4, the structural minimum for the pattern; n >= 3; s > 1;
    mix_eps strictly inside (0, 1).
    """

    mix_eps: Fraction
    s: Fraction
    k: int
    n: int = 3

    def __post_init__(self) -> None:
        object.__setattr__(self, "mix_eps", Fraction(self.mix_eps))
        object.__setattr__(self, "s", Fraction(self.s))
        if not 0 < self.mix_eps < 1:
            raise ParameterError(f"mix_eps must lie strictly in (0, 1), got {self.mix_eps}")
        if self.s <= 1:
            raise ParameterError(f"s must be > 1, got {self.s}")
        if self.k % 2 != 0:
            raise ParameterError(f"k must be even, got {self.k}")
        if self.k < 4:
            raise ParameterError(f"k must be >= 4, got {self.k}")
        if self.n < 3:
            raise ParameterError(f"n must be >= 3, got {self.n}")

    @property
    def row_count(self) -> int:
        return 2 * self.k - 1


def row_exponents(row: int, k: int) -> tuple[int, int]:
    """Exponents (e2, e3) of columns 2 and 3 in the given row (2 <= row <= 2k-1).

    Rows pair up as (2t, 2t+1) carrying exponents {t+1, t+2}; within pair
    t the even-indexed row takes the lower exponent in column 2 for odd t
    and the higher one for even t, the odd-indexed row the reverse.
    """
    if not 2 <= row <= 2 * k - 1:
        raise ParameterError(f"row {row} outside 2..{2 * k - 1}")
    t = row // 2
    low, high = t + 1, t + 2
    even_row = row % 2 == 0
    if (t % 2 == 1) == even_row:
        return low, high
    return high, low


def build_hard_family(params: ConstructionParams) -> PriorFamily:
    """Deterministically build the hard family for the given parameters."""
    s, k, n = params.s, params.k, params.n
    padding = (Fraction(1),) * (n - 3)
    scenarios = [Scenario(id=1, values=(s, Fraction(1), Fraction(1)) + padding)]
    probabilities = [params.mix_eps]
    tail_probability = (1 - params.mix_eps) / (2 * k - 2)
    for row in range(2, 2 * k):
        e2, e3 = row_exponents(row, k)
        scenarios.append(Scenario(id=row, values=(s, s ** e2, s ** e3) + padding))
        probabilities.append(tail_probability)
    return PriorFamily(
        n=n,
        scenarios=tuple(scenarios),
        probabilities=tuple(probabilities),
        prediction_id=1,
        base=s,
    )


def first_appearance_row(i: int, k: int) -> int:
    """First row whose column-2 entry is s^i, in closed form: 2i - 4 + (i mod 2)."""
    if not 3 <= i <= k + 1:
        raise ParameterError(f"exponent {i} outside 3..{k + 1}")
    return 2 * i - 4 + (i % 2)


def confusion_pair_rows(i: int, column: Column, k: int) -> tuple[int, int]:
    """The two rows whose given column equals s^i (3 <= i <= k).

    Found by scanning the exponent pattern; the closed form
    (2i - 4 + (i mod 2), 2i - 2 + (i mod 2)) for column 2 and its swap
    partners for column 3 is asserted against the scan.
    """
    if column not in (2, 3):
        raise ParameterError(f"column must be 2 or 3, got {column}")
    if not 3 <= i <= k:
        raise ParameterError(
            f"exponent {i} outside 3..{k}: s^2 and s^{k + 1} occur once per column, not twice"
        )
    matches = tuple(
        row
        for row in range(2, 2 * k)
        if row_exponents(row, k)[0 if column == 2 else 1] == i
    )
    if column == 2:
        closed_form = (2 * i - 4 + (i % 2), 2 * i - 2 + (i % 2))
    else:
        closed_form = tuple(sorted(swap_partner_row(r) for r in
                                   (2 * i - 4 + (i % 2), 2 * i - 2 + (i % 2))))
    assert matches == closed_form, (
        f"pattern scan {matches} disagrees with closed form {closed_form}"
    )
    return matches


def swap_partner_row(row: int) -> int:
    """The other member of a swap pair: (2t, 2t+1) map to each other."""
    if row < 2:
        raise ParameterError("row 1 has no swap partner")
    return row + 1 if row % 2 == 0 else row - 1


# ---------------------------------------------------------------------------
# Table renderings.
# ---------------------------------------------------------------------------

def render_family_markdown(family: PriorFamily) -> str:
    """Markdown table with one line per row: id, candidate values, probability."""
    n = family.n
    header = ["row"] + [f"X_{j}" for j in range(1, n + 1)] + ["probability"]
    lines = ["| " + " | ".join(header) + " |",
             "|" + "---|" * len(header)]
    for scenario, probability in family.items():
        cells = [str(scenario.id)]
        # the table reads better with bare "s" for the first power
        cells += [
            "s" if (rendered := format_value_with_base(v, family.base)) == "s^1"
            else rendered
            for v in scenario.values
        ]
        cells.append(format_value(probability))
        lines.append("| " + " | ".join(cells) + " |")
    if family.base is not None:
        lines.append("")
        lines.append(f"s = {format_value(family.base)}")
    return "\n".join(lines) + "\n"


def render_family_csv(family: PriorFamily) -> str:
    """CSV with the same layout as the Markdown table, values fully expanded."""
    n = family.n
    header = ["row"] + [f"X_{j}" for j in range(1, n + 1)] + ["probability"]
    lines = [",".join(header)]
    for scenario, probability in family.items():
        cells = [str(scenario.id)]
        cells += [format_value(v) for v in scenario.values]
        cells.append(format_value(probability))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"
