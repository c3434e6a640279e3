"""Build the hard prior family and reproduce its table.

Every scenario shares X_1 = s, so the first column never tells rows
apart; columns X_2 and X_3 carry paired powers of s arranged so that at
the first arrival several rows are indistinguishable.
"""

from fractions import Fraction

from secretary_lab import (
    ConstructionParams,
    build_hard_family,
    confusion_pair_rows,
    first_appearance_row,
    render_family_markdown,
)

params = ConstructionParams(mix_eps=Fraction(1, 10), s=Fraction(5), k=6)
family = build_hard_family(params)

print(f"k = {params.k}, so the family has {params.row_count} rows:")
print()
print(render_family_markdown(family))
print()

# Where does the value s^i first show up in column X_2, and which two
# rows share it there?
for i in range(3, params.k + 1):
    row = first_appearance_row(i, params.k)
    pair = confusion_pair_rows(i, 2, params.k)
    print(
        f"s^{i} first appears in X_2 on row {row}; "
        f"rows {pair[0]} and {pair[1]} both carry it"
    )

print()
print("An observer seeing X_2 = s^i at the first arrival cannot tell the")
print("two rows of the pair apart, and their maxima differ by a factor s.")
