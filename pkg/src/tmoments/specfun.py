"""Scalar special functions: log-gamma, regularized incomplete beta, and the
Student t normalizing constant.

Self-contained double-precision implementations: a Lanczos approximation for
log-gamma and a modified-Lentz continued fraction for the incomplete beta.
All gamma-function ratios elsewhere in the library are formed in log space
through :func:`log_gamma`, so nothing overflows for large degrees of freedom.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["log_gamma", "reg_inc_beta", "normalizing_constant"]

# Lanczos coefficients for g = 7, n = 9 (Godfrey's tabulation); relative error
# of the reconstructed gamma is below 1e-13 on the positive axis.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)

# Continued-fraction controls for the incomplete beta.
_CF_MAX_ITER = 300
_CF_EPS = 1e-15
_CF_TINY = 1e-300


def log_gamma(x: float) -> float:
    """Natural logarithm of the gamma function for real ``x > 0``.

    Arguments below 0.5 go through the reflection formula; everything else is
    the direct Lanczos sum evaluated in log space.
    """
    if not (isinstance(x, (int, float)) and math.isfinite(x) and x > 0.0):
        raise ValueError(f"log_gamma requires finite x > 0, got {x!r}")
    if x < 0.5:
        # Gamma(x) Gamma(1 - x) = pi / sin(pi x)
        return math.log(math.pi / math.sin(math.pi * x)) - log_gamma(1.0 - x)
    z = x - 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_TWO_PI + (z + 0.5) * math.log(t) - t + math.log(acc)


def _beta_cf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta, by the modified Lentz
    scheme. Converges fast only for x < (a + 1) / (a + b + 2); the caller is
    responsible for the symmetry switch."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            break
    return h


def reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b).

    Requires ``a > 0``, ``b > 0`` and ``0 <= x <= 1``; the endpoints return 0
    and 1 exactly without iterating.
    """
    if not (math.isfinite(a) and math.isfinite(b) and a > 0.0 and b > 0.0):
        raise ValueError(f"reg_inc_beta requires a, b > 0, got a={a!r}, b={b!r}")
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"reg_inc_beta requires 0 <= x <= 1, got x={x!r}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    front = math.exp(
        log_gamma(a + b) - log_gamma(a) - log_gamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, 1.0 - x) / b


def normalizing_constant(nu: float) -> float:
    """Height of the standard Student t density at zero.

    Equal to Gamma((nu + 1) / 2) / (Gamma(nu / 2) sqrt(pi nu)), assembled in
    log space so that large ``nu`` cannot overflow the gamma ratio.
    """
    if not (isinstance(nu, (int, float)) and math.isfinite(nu) and nu > 0.0):
        raise ValueError(f"normalizing_constant requires finite nu > 0, got {nu!r}")
    return math.exp(
        log_gamma(0.5 * (nu + 1.0)) - log_gamma(0.5 * nu)
        - 0.5 * math.log(math.pi * nu)
    )


def _beta_cf_vec(a: float, b: float, x: np.ndarray) -> np.ndarray:
    # Vectorized modified Lentz; same recurrence as _beta_cf, run until every
    # lane converges. Converged lanes keep multiplying by ~1, which is stable.
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = np.ones_like(x)
    d = 1.0 - qab * x / qap
    np.copyto(d, _CF_TINY, where=np.abs(d) < _CF_TINY)
    d = 1.0 / d
    h = d.copy()
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        np.copyto(d, _CF_TINY, where=np.abs(d) < _CF_TINY)
        c = 1.0 + aa / c
        np.copyto(c, _CF_TINY, where=np.abs(c) < _CF_TINY)
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        np.copyto(d, _CF_TINY, where=np.abs(d) < _CF_TINY)
        c = 1.0 + aa / c
        np.copyto(c, _CF_TINY, where=np.abs(c) < _CF_TINY)
        d = 1.0 / d
        delta = d * c
        h *= delta
        if np.all(np.abs(delta - 1.0) < _CF_EPS):
            break
    return h


def _reg_inc_beta_vec(a: float, b: float, x: np.ndarray) -> np.ndarray:
    """Vectorized I_x(a, b) for scalar (a, b) and an array of x in [0, 1].
    Internal: used by the bulk CDF/quantile paths."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    out[x <= 0.0] = 0.0
    out[x >= 1.0] = 1.0
    interior = (x > 0.0) & (x < 1.0)
    if not interior.any():
        return out
    xi = x[interior]
    log_beta = log_gamma(a + b) - log_gamma(a) - log_gamma(b)
    front = np.exp(log_beta + a * np.log(xi) + b * np.log1p(-xi))
    res = np.empty_like(xi)
    direct = xi < (a + 1.0) / (a + b + 2.0)
    if direct.any():
        res[direct] = front[direct] * _beta_cf_vec(a, b, xi[direct]) / a
    flipped = ~direct
    if flipped.any():
        res[flipped] = 1.0 - front[flipped] * _beta_cf_vec(b, a, 1.0 - xi[flipped]) / b
    out[interior] = res
    return out
