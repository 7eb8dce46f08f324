from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from rentfair.model import (Affine, Economy, Family, Objective, Preference, SlopeSet, as_fraction,
                            high_rent_bound, kappa, linearized_value, low_rent_bound, nu_lambda,
                            sb_set, utility, validate)
from rentfair.oracle import oracle_solve

from conftest import e1, e2, random_economy

small = st.fractions(min_value=-50, max_value=50, max_denominator=12)
slope = st.sampled_from([F(0), F(1, 2), F(1), F(3)])


@pytest.mark.parametrize("rent,expected", [(4, 6), (7, 1), (5, 5)])
def test_utility_branches(rent, expected):
    assert utility(Preference((10,), 5, 1), F(rent), 0) == expected


@pytest.mark.parametrize("v,rho,b,expected", [(10, 1, 4, 7), (10, 0, 99, 10), (2, 1, 5, F(7, 2))])
def test_linearized_value(v, rho, b, expected):
    assert linearized_value(Preference((v,), b, rho), 0) == expected


@pytest.mark.parametrize("rents,expected", [
    ((7, 5), {(0, 0), (1, 0)}),
    ((10, 8), {(0, 0), (0, 1), (1, 0), (1, 1)}),
    ((1, 2), set()),
])
def test_sb_set(rents, expected):
    assert sb_set(e2(), [F(r) for r in rents]) == expected


@pytest.mark.parametrize("v,rho,b,r,expected", [(10, 1, 5, 10, (15, 2)), (10, 1, 5, 5, (10, 1)),
                                                (6, 0, 5, 9, (6, 1))])
def test_nu_lambda(v, rho, b, r, expected):
    e = Economy.build([[v]], [b], [rho], r)
    nu, lam = nu_lambda(e, [F(r)])
    assert (nu[0][0], lam[0][0]) == expected


@pytest.mark.parametrize("v,rho,b,r,expected", [(10, 1, 5, 5, 2), (10, 1, 5, 3, 1), (10, 0, 5, 9, 1)])
def test_kappa(v, rho, b, r, expected):
    e = Economy.build([[v]], [b], [rho], r)
    assert kappa(e, [F(r)])[0][0] == expected


def test_high_rent_bound_examples():
    assert high_rent_bound(e2()) == 18
    flat = Economy.build([[3, 3], [3, 3]], [0, 0], [0, 0], 0)
    assert high_rent_bound(flat) == 0
    single = Economy.build([[4]], [7], [1], 0)
    assert high_rent_bound(single) == 7


def test_low_rent_bound_examples():
    assert low_rent_bound(e2()) == -6
    flat = Economy.build([[3, 3], [3, 3]], [5, 5], [1, 1], 0)
    assert low_rent_bound(flat) == 10
    steep = Economy.build([[100, 0], [0, 0]], [5, 5], [1, 1], 0)
    assert low_rent_bound(steep) < 0


def test_validate_ok_and_violations():
    assert validate(e2()) == []
    bad = Economy(e2().prefs, SlopeSet((F(0), F(1))), F(10), rooms=("a", "b", "c"))
    assert "agent/room count mismatch" in validate(bad)
    obj = Objective(Family.MAXMIN_UTILITY, (0, 1), (Affine(0, 1), Affine()))
    assert "affine slope must be positive" in validate(e2(), obj)
    assert "slope set must contain 0" in SlopeSet((F(1), F(2))).violations()


def test_as_fraction_refuses_floats():
    assert as_fraction("3/4") == F(3, 4)
    assert as_fraction("1.25") == F(5, 4)
    with pytest.raises(TypeError):
        as_fraction(0.5)
    with pytest.raises(TypeError):
        as_fraction(True)


@given(v=small, b=small, rho=slope, r0=small)
def test_piecewise_consistency(v, b, rho, r0):
    pref = Preference((v,), b, rho)
    e = Economy((pref,), SlopeSet((F(0), F(1, 2), F(1), F(3))), r0)
    nu, lam = nu_lambda(e, [r0])
    k = kappa(e, [r0])[0][0]
    eps = abs(r0 - b) if r0 != b else F(1)
    for t in (r0 - eps, r0 - eps / 2, r0):
        assert utility(pref, t, 0) == nu[0][0] - lam[0][0] * t
    base = utility(pref, r0, 0)
    for t in (r0, r0 + eps / 2, r0 + eps):
        assert utility(pref, t, 0) == base - k * (t - r0)


@given(v=small, b=small, rho=slope)
def test_kink_continuity(v, b, rho):
    assert utility(Preference((v,), b, rho), b, 0) == v - b
    assert v - b == (v + rho * b) - (1 + rho) * b


@given(v=small, b=small, rho=slope, r=small, d=st.fractions(min_value=F(1, 100), max_value=10))
def test_strictly_decreasing(v, b, rho, r, d):
    pref = Preference((v,), b, rho)
    assert utility(pref, r + d, 0) < utility(pref, r, 0)


@given(v=small, b=small, rho=slope, d=st.fractions(min_value=F(1, 100), max_value=10))
def test_linearized_identity_above_budget(v, b, rho, d):
    pref = Preference((v,), b, rho)
    r = b + d
    assert utility(pref, r, 0) == (1 + rho) * (linearized_value(pref, 0) - r)


def test_e1_bounds_at_boundaries():
    # quasi-linear with zero budgets: m' is twice the value spread
    assert high_rent_bound(e1()) == 16


@pytest.mark.slow
def test_rent_bounds_hold_on_oracle_witnesses(rng):
    for _ in range(200):
        n = rng.randint(1, 3)
        e = random_economy(rng, n, rng.randint(1, 3))
        hi = e.with_total(high_rent_bound(e))
        lo = e.with_total(low_rent_bound(e))
        for fam in Family:
            obj = Objective.full(fam, n)
            assert min(oracle_solve(hi, obj)[1].rents) >= max(e.b)
            assert max(oracle_solve(lo, obj)[1].rents) <= min(e.b)
