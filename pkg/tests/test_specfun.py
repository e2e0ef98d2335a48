"""Special-function floor: log-gamma, regularized incomplete beta, C(nu)."""

import math

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from tmoments import log_gamma, normalizing_constant, reg_inc_beta
from tmoments.specfun import _reg_inc_beta_vec
from tmoments.student import StudentParams, pdf


@pytest.mark.parametrize(
    "x, expected",
    [
        (1.0, 0.0),
        (2.0, 0.0),
        (0.5, 0.5 * math.log(math.pi)),
        (6.0, math.log(120.0)),
    ],
)
def test_log_gamma_exact_values(x, expected):
    assert log_gamma(x) == pytest.approx(expected, abs=1e-13)


def test_log_gamma_against_libm():
    # math.lgamma is an independent implementation; agree to 1e-13 relative
    # (absolute near the zeros of log-gamma at x = 1, 2)
    for x in np.logspace(-1, 6, 400):
        ref = math.lgamma(float(x))
        assert abs(log_gamma(float(x)) - ref) <= 1e-13 * max(1.0, abs(ref))


@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
def test_log_gamma_domain(bad):
    with pytest.raises(ValueError):
        log_gamma(bad)


@given(st.floats(min_value=0.1, max_value=100.0))
@settings(max_examples=200)
def test_log_gamma_recurrence(x):
    # Gamma(x + 1) = x Gamma(x)
    assert math.exp(log_gamma(x + 1.0) - log_gamma(x)) == pytest.approx(x, rel=1e-12)


@pytest.mark.parametrize(
    "a, b, x, expected",
    [
        (1.0, 1.0, 0.25, 0.25),
        (0.5, 0.5, 0.5, 0.5),
        (2.0, 3.0, 0.0, 0.0),
        (2.0, 3.0, 1.0, 1.0),
    ],
)
def test_reg_inc_beta_exact_values(a, b, x, expected):
    assert reg_inc_beta(a, b, x) == pytest.approx(expected, abs=1e-13)


@pytest.mark.parametrize("a", [0.3, 1.0, 2.5, 7.0, 40.0])
def test_reg_inc_beta_symmetric_midpoint(a):
    assert reg_inc_beta(a, a, 0.5) == pytest.approx(0.5, abs=1e-13)


def test_reg_inc_beta_endpoints_exact():
    assert reg_inc_beta(3.0, 4.0, 0.0) == 0.0
    assert reg_inc_beta(3.0, 4.0, 1.0) == 1.0


@pytest.mark.parametrize(
    "a, b, x",
    [(0.0, 1.0, 0.5), (-1.0, 1.0, 0.5), (1.0, 0.0, 0.5), (1.0, 1.0, -0.1), (1.0, 1.0, 1.1)],
)
def test_reg_inc_beta_domain(a, b, x):
    with pytest.raises(ValueError):
        reg_inc_beta(a, b, x)


@given(
    st.floats(min_value=0.05, max_value=50.0),
    st.floats(min_value=0.05, max_value=50.0),
    st.integers(min_value=0, max_value=2**16),
)
@settings(max_examples=300)
def test_reg_inc_beta_symmetry_identity(a, b, k):
    # dyadic x so that 1 - x is exact; otherwise the rounding of the
    # complement alone can exceed the identity tolerance near the endpoints
    x = k / 2.0**16
    assert reg_inc_beta(a, b, x) + reg_inc_beta(b, a, 1.0 - x) == pytest.approx(1.0, abs=1e-13)


def test_reg_inc_beta_monotone_in_x():
    rng = np.random.default_rng(3)
    for a, b in [(0.25, 0.5), (1.25, 0.5), (5.0, 2.0), (0.7, 9.0)]:
        xs = np.sort(rng.uniform(0.0, 1.0, 200))
        vals = [reg_inc_beta(a, b, float(x)) for x in xs]
        assert all(v2 >= v1 for v1, v2 in zip(vals, vals[1:]))


def test_reg_inc_beta_against_scipy():
    rng = np.random.default_rng(11)
    for _ in range(300):
        a = float(rng.uniform(0.05, 30.0))
        b = float(rng.uniform(0.05, 30.0))
        x = float(rng.uniform(0.0, 1.0))
        assert reg_inc_beta(a, b, x) == pytest.approx(float(sp.betainc(a, b, x)), abs=1e-13)


def test_reg_inc_beta_vec_matches_scalar():
    rng = np.random.default_rng(5)
    x = rng.uniform(0.0, 1.0, 500)
    x[:2] = [0.0, 1.0]
    for a, b in [(1.25, 0.5), (0.25, 0.5), (15.0, 0.5)]:
        got = _reg_inc_beta_vec(a, b, x)
        ref = np.array([reg_inc_beta(a, b, float(v)) for v in x])
        assert np.max(np.abs(got - ref)) < 1e-15


@pytest.mark.parametrize(
    "nu, expected",
    [
        (1.0, 1.0 / math.pi),
        (2.0, 1.0 / (2.0 * math.sqrt(2.0))),
        (4.0, 0.375),
    ],
)
def test_normalizing_constant_exact_values(nu, expected):
    assert normalizing_constant(nu) == pytest.approx(expected, rel=1e-14)


def test_normalizing_constant_large_nu_limit():
    # approaches the normal density at zero
    assert normalizing_constant(1e6) == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), abs=1e-6)


@pytest.mark.parametrize("nu", [0.3, 1.0, 2.5, 7.0, 30.0, 500.0])
def test_normalizing_constant_is_density_at_zero(nu):
    assert normalizing_constant(nu) == pytest.approx(
        pdf(0.0, StudentParams(0.0, nu)), rel=1e-13
    )


@pytest.mark.parametrize("bad", [0.0, -3.0, math.inf, math.nan])
def test_normalizing_constant_domain(bad):
    with pytest.raises(ValueError):
        normalizing_constant(bad)
