from fractions import Fraction
from random import Random

import pytest

from groupshare.smallcancel import random_platform_group


@pytest.fixture(scope="session")
def platform_group():
    """One C'(1/6) presentation shared by the slower word-level tests."""
    return random_platform_group(3, 3, 40, Fraction(1, 6), Random(1701))


@pytest.fixture(scope="session")
def platform_groups():
    """Three distinct participant groups."""
    rng = Random(2024)
    return tuple(random_platform_group(3, 3, 40, Fraction(1, 6), rng) for _ in range(3))
