import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from channel_limits.errors import DomainError
from channel_limits.exclusion import (
    BOSE,
    FERMI,
    SEMION,
    StatParam,
    as_stat,
    entropy_density,
    occupation,
    solve_log_w,
    solve_w,
)

G_VALUES = ["0", "1/5", "1/4", "1/3", "1/2", "2/3", "3/4", "1"]


def residual(x, g):
    g = as_stat(g)
    u = solve_log_w(x, g)
    return g.value * u + (1 - g.value) * np.logaddexp(0.0, u) - x


# -- StatParam ---------------------------------------------------------------

def test_statparam_normalises_to_lowest_terms():
    g = StatParam(2, 4)
    assert (g.numerator, g.denominator) == (1, 2)
    assert g == SEMION and g.is_semion


@pytest.mark.parametrize("num,den", [(-1, 2), (3, 2), (1, 0)])
def test_statparam_rejects_out_of_range(num, den):
    with pytest.raises(DomainError):
        StatParam(num, den)


def test_as_stat_accepts_exact_floats_and_strings():
    assert as_stat(0.25) == StatParam(1, 4)
    assert as_stat(1 / 3) == StatParam(1, 3)
    assert as_stat("2/6") == StatParam(1, 3)
    assert as_stat(Fraction(3, 4)) == StatParam(3, 4)
    with pytest.raises(DomainError):
        as_stat(math.pi / 4)


def test_statparam_orders_by_value():
    gs = sorted(as_stat(g) for g in ["1", "1/2", "2/3", "1/8", "0", "3/7"])
    assert [str(g) for g in gs] == ["0", "1/8", "3/7", "1/2", "2/3", "1"]


# -- solver examples -----------------------------------------------------------

def test_solve_w_examples():
    assert solve_w(0.0, FERMI) == pytest.approx(1.0, rel=1e-15)
    assert solve_w(math.log(2.0), BOSE) == pytest.approx(1.0, rel=1e-14)
    assert solve_w(0.0, SEMION) == pytest.approx((math.sqrt(5) - 1) / 2, rel=1e-15)


def test_bose_domain_error():
    with pytest.raises(DomainError):
        solve_w(0.0, BOSE)
    with pytest.raises(DomainError):
        occupation(-1.0, BOSE)


def test_non_finite_x_rejected():
    with pytest.raises(DomainError):
        solve_w(math.inf, FERMI)


@pytest.mark.parametrize("g", G_VALUES)
def test_residual_on_random_sample(g):
    rng = np.random.default_rng(11)
    x = rng.uniform(-20.0, 50.0, 1000)
    if g == "0":
        x = np.abs(x) + 1e-9
    res = residual(x, g)
    assert np.max(np.abs(res) / np.maximum(1.0, np.abs(x))) <= 1e-13


@pytest.mark.parametrize("g", ["0", "1/2", "1"])
def test_iterative_matches_closed_form(g):
    x = np.linspace(-20.0, 50.0, 2001)
    if g == "0":
        x = x[x > 0.0]
    closed = solve_w(x, g)
    iterative = solve_w(x, g, method="iterative")
    assert np.max(np.abs(iterative / closed - 1.0)) <= 1e-12


@given(
    x=st.floats(-200.0, 700.0, allow_nan=False),
    den=st.integers(1, 12),
    data=st.data(),
)
def test_residual_property(x, den, data):
    num = data.draw(st.integers(0, den))
    if num == 0 and x <= 0.0:
        x = abs(x) + 1e-3
    res = residual(x, StatParam(num, den))
    assert abs(res) <= 1e-13 * max(1.0, abs(x))


def test_solver_against_mpmath_root():
    mp.mp.dps = 40
    for g in [Fraction(1, 3), Fraction(2, 5), Fraction(5, 7)]:
        for x in [-15.0, -1.0, 0.0, 0.7, 12.0, 45.0]:
            gg = mp.mpf(g.numerator) / g.denominator
            # w^g (1+w)^(1-g) = e^x solved by bisection in ln w
            root = mp.findroot(
                lambda u: gg * u + (1 - gg) * mp.log(1 + mp.exp(u)) - x,
                (mp.mpf(x) / gg - 60, mp.mpf(x) + 60),
                solver="illinois",
            )
            assert solve_log_w(x, g) == pytest.approx(float(root), rel=1e-13, abs=1e-13)


# -- occupation -----------------------------------------------------------------

def test_occupation_examples():
    assert occupation(0.0, FERMI) == pytest.approx(0.5, rel=1e-15)
    assert occupation(0.0, SEMION) == pytest.approx(2 / math.sqrt(5), rel=1e-15)
    assert occupation(40.0, "1/3") == pytest.approx(math.exp(-40.0), rel=1e-12)


def test_bose_fermi_limits():
    x = np.linspace(0.01, 40.0, 400)
    assert np.allclose(occupation(x, BOSE), 1.0 / np.expm1(x), rtol=1e-12, atol=0)
    x = np.linspace(-30.0, 40.0, 400)
    assert np.allclose(occupation(x, FERMI), 1.0 / (np.exp(x) + 1.0), rtol=1e-12, atol=0)


@pytest.mark.parametrize("g", ["0", "1/3", "1/2", "1"])
def test_occupation_no_overflow_at_large_x(g):
    # the series e^{-x}(1 + (1 - 2g) e^{-x}) is exact to double precision here
    for x in [700.0, 720.0, 745.0]:
        f = occupation(x, g)
        assert math.isfinite(f)
        assert f == pytest.approx(math.exp(-x), rel=1e-12) or f == 0.0
    assert occupation(1000.0, g) == 0.0


def test_large_x_series_sign():
    # second-order term of f for large x is (1 - 2g) e^{-2x}
    x = 8.0
    for g in ["0", "1/4", "1/2", "1"]:
        gv = float(Fraction(g))
        f = occupation(x, g)
        correction = (f * math.exp(x) - 1.0) * math.exp(x)
        assert correction == pytest.approx(1.0 - 2.0 * gv, abs=2e-3)


@given(x1=st.floats(-30.0, 60.0), dx=st.floats(1e-3, 10.0), g=st.sampled_from(G_VALUES[1:]))
def test_occupation_strictly_decreasing_in_x(x1, dx, g):
    # ln w is strictly increasing; f itself saturates at 1/g in floating point
    assert solve_log_w(x1 + dx, g) > solve_log_w(x1, g)
    f1, f2 = occupation(x1, g), occupation(x1 + dx, g)
    assert f2 <= f1
    if f1 < 0.999 / float(Fraction(g)):
        assert f2 < f1


def test_occupation_decreasing_in_g_on_grid():
    gs = [StatParam(k, 8) for k in range(9)]
    for x in np.linspace(0.05, 30.0, 60):
        vals = [occupation(x, g) for g in gs]
        assert all(b < a for a, b in zip(vals, vals[1:]))
    for x in np.linspace(-10.0, -0.05, 40):
        vals = [occupation(x, g) for g in gs[1:]]
        assert all(b < a for a, b in zip(vals, vals[1:]))


@given(x=st.floats(-40.0, 60.0), g=st.sampled_from(G_VALUES[1:]))
def test_occupation_bounded_by_inverse_g(x, g):
    f = occupation(x, g)
    assert 0.0 <= f <= 1.0 / float(Fraction(g))


# -- entropy density -------------------------------------------------------------

def _literal_entropy(f, g):
    g = mp.mpf(g.numerator) / g.denominator

    def zlog(z):
        return 0 if z == 0 else z * mp.log(z)

    return -(zlog(f) + zlog(1 - g * f) - zlog(1 + (1 - g) * f))


def test_entropy_density_examples():
    assert entropy_density(0.0, FERMI) == pytest.approx(math.log(2.0), rel=1e-15)
    mp.mp.dps = 40
    f = 2 / mp.sqrt(5)
    expected = _literal_entropy(f, Fraction(1, 2))
    assert entropy_density(0.0, SEMION) == pytest.approx(float(expected), rel=1e-14)


@pytest.mark.parametrize("g", [Fraction(1, 5), Fraction(1, 3), Fraction(3, 4)])
def test_entropy_density_against_literal_formula(g):
    mp.mp.dps = 40
    for x in [-8.0, -0.3, 0.0, 2.5, 20.0]:
        f = mp.mpf(occupation(x, g))
        assert entropy_density(x, g) == pytest.approx(float(_literal_entropy(f, g)), rel=1e-11)


@given(x=st.floats(-40.0, 700.0), g=st.sampled_from(G_VALUES[1:]))
def test_entropy_density_non_negative(x, g):
    assert entropy_density(x, g) >= 0.0


def test_entropy_density_vanishes_far_from_edge():
    assert entropy_density(700.0, BOSE) < 1e-300
    assert entropy_density(-700.0, FERMI) < 1e-300
