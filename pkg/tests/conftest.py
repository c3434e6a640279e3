from fractions import Fraction

import pytest

from secretary_lab import ConstructionParams, build_hard_family

GRID_EPS = (Fraction(1, 10), Fraction(259, 10000), Fraction(1, 100))
GRID_S = (Fraction(5), Fraction(19), Fraction(76))
GRID_K = (4, 6, 20)


@pytest.fixture(scope="session")
def anchor_params() -> ConstructionParams:
    return ConstructionParams(mix_eps=Fraction(1, 10), s=Fraction(5), k=4)


@pytest.fixture(scope="session")
def anchor_family(anchor_params):
    return build_hard_family(anchor_params)
