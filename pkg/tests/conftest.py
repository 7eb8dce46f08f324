import functools
import random
from fractions import Fraction

import pytest

from rentfair.model import Economy
from rentfair.oracle import oracle_solve

SLOPES = (Fraction(0), Fraction(1, 2), Fraction(2))


def e1(total=10):
    """Quasi-linear two-agent economy."""
    return Economy.build([[10, 2], [4, 6]], [0, 0], [0, 0], total)


def e2(total=10):
    """Same values with soft budgets 5 and unit violation slopes."""
    return Economy.build([[10, 2], [4, 6]], [5, 5], [1, 1], total, slope_set=[0, 1])


def random_economy(rng: random.Random, n: int, k: int, budgets=(20, 40, 60), total=None):
    slopes = SLOPES[:k]
    values = [[rng.randint(0, 100) for _ in range(n)] for _ in range(n)]
    bs = [rng.choice(budgets) for _ in range(n)]
    rhos = [rng.choice(slopes) for _ in range(n)]
    m = rng.randint(-50, 60 * n) if total is None else total
    return Economy.build(values, bs, rhos, m, slope_set=slopes)


@functools.lru_cache(maxsize=None)
def oracle(economy, objective):
    return oracle_solve(economy, objective)


@pytest.fixture
def rng(request):
    return random.Random(request.node.name)
