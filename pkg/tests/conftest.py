import itertools

import pytest

from ctslab.field import Rng


@pytest.fixture
def rng():
    return Rng(12345)


def grid(p, n):
    return list(itertools.product(range(p), repeat=n))
