import random

import pytest

from padiclab.core import PrimeContext


@pytest.fixture
def two() -> PrimeContext:
    return PrimeContext(2)


@pytest.fixture
def three() -> PrimeContext:
    return PrimeContext(3)


@pytest.fixture
def five() -> PrimeContext:
    return PrimeContext(5)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240607)
