"""Location-scale Student t distribution: density, CDF, quantile, sampling.

This module owns the base variate everything else folds or truncates. All
functions are pure; sampling takes its seed explicitly, so concurrent callers
never share generator state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import _reg_inc_beta_vec, normalizing_constant, reg_inc_beta

__all__ = ["StudentParams", "pdf", "cdf", "prob_positive", "quantile", "sample"]


@dataclass(frozen=True)
class StudentParams:
    """Parameter triple: location ``mu``, degrees of freedom ``nu``, scale
    ``sigma`` (default 1). ``nu`` may be any positive real."""

    mu: float
    nu: float
    sigma: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mu)):
            raise ValueError(f"location must be finite, got {self.mu!r}")
        if not (math.isfinite(self.nu) and self.nu > 0.0):
            raise ValueError(f"degrees of freedom must be finite and > 0, got {self.nu!r}")
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise ValueError(f"scale must be finite and > 0, got {self.sigma!r}")

    def standardized(self) -> "StudentParams":
        """The (0, nu, 1) member of the same family."""
        return StudentParams(0.0, self.nu, 1.0)


def pdf(x: float, p: StudentParams) -> float:
    """Density at ``x``: (C(nu)/sigma) [1 + ((x-mu)/sigma)^2 / nu]^(-(nu+1)/2)."""
    z = (x - p.mu) / p.sigma
    return (normalizing_constant(p.nu) / p.sigma) * math.exp(
        -0.5 * (p.nu + 1.0) * math.log1p(z * z / p.nu)
    )


def cdf(x: float, p: StudentParams) -> float:
    """Distribution function, through the regularized incomplete beta.

    For the standardized value t = (x - mu)/sigma, the tail mass is
    I_{nu/(nu+t^2)}(nu/2, 1/2) / 2; the sign of t picks which side it is.
    """
    t = (x - p.mu) / p.sigma
    xb = p.nu / (p.nu + t * t)
    tail = 0.5 * reg_inc_beta(0.5 * p.nu, 0.5, xb)
    return tail if t <= 0.0 else 1.0 - tail


def prob_positive(p: StudentParams) -> float:
    """P(X > 0) = F_std(mu / sigma).

    Evaluated on the side of the beta switch that avoids cancellation, so the
    result keeps full relative accuracy even when it is very small.
    """
    return cdf(p.mu / p.sigma, p.standardized())


def quantile(q: float, p: StudentParams, tol: float = 1e-10) -> float:
    """Value x with cdf(x, p) = q, to ``tol`` in probability space.

    Bracketed bisection/secant hybrid: heavy tails defeat naive Newton
    starts, so the bracket is expanded geometrically until it straddles the
    root and every accepted step stays inside it.
    """
    if not (0.0 < q < 1.0):
        raise ValueError(f"quantile requires 0 < q < 1, got {q!r}")
    span = 1e6 * p.sigma
    lo = p.mu - span
    for _ in range(120):
        if not math.isfinite(lo):
            lo = -8.9e307
            break
        if cdf(lo, p) <= q:
            break
        span *= 8.0
        lo = p.mu - span
    span = 1e6 * p.sigma
    hi = p.mu + span
    for _ in range(120):
        if not math.isfinite(hi):
            hi = 8.9e307
            break
        if cdf(hi, p) >= q:
            break
        span *= 8.0
        hi = p.mu + span
    flo = cdf(lo, p) - q
    fhi = cdf(hi, p) - q
    x = 0.5 * (lo + hi)
    for it in range(200):
        # secant on odd iterations only: forced bisection keeps the huge
        # initial bracket collapsing even while the tails are flat
        if it % 2 and fhi != flo:
            cand = lo - flo * (hi - lo) / (fhi - flo)
            if not (lo < cand < hi):
                cand = 0.5 * (lo + hi)
        else:
            cand = 0.5 * (lo + hi)
        x = cand
        fx = cdf(x, p) - q
        if abs(fx) <= tol:
            return x
        if fx < 0.0:
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
        if hi - lo <= 4.0 * math.ulp(max(abs(lo), abs(hi))):
            return x
    return x


def sample(p: StudentParams, n: int, seed: int) -> np.ndarray:
    """``n`` i.i.d. draws: standard normal over sqrt(chi-square(nu)/nu), then
    the location-scale map. Identical (p, n, seed) gives identical output."""
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n!r}")
    rng = np.random.default_rng(seed)
    return _sample_with(rng, p, n)


def _sample_with(rng: np.random.Generator, p: StudentParams, n: int) -> np.ndarray:
    z = rng.standard_normal(n)
    w = rng.chisquare(p.nu, n)
    return p.mu + p.sigma * z / np.sqrt(w / p.nu)


def _pdf_std_vec(t: np.ndarray, nu: float) -> np.ndarray:
    return normalizing_constant(nu) * np.exp(-0.5 * (nu + 1.0) * np.log1p(t * t / nu))


def _cdf_std_vec(t: np.ndarray, nu: float) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    xb = nu / (nu + t * t)
    tail = 0.5 * _reg_inc_beta_vec(0.5 * nu, 0.5, xb)
    return np.where(t <= 0.0, tail, 1.0 - tail)


def _lower_quantile_std_vec(q: np.ndarray, nu: float) -> np.ndarray:
    """Standard-t quantiles for lower-tail probabilities q in (0, 0.5].

    Safeguarded Newton. The CDF is convex on the negative axis, so every
    Newton iterate lands at or right of the root; iterates are clipped at
    zero where convexity flips. Seeded with the power-law tail estimate,
    which is nearly exact for small q.
    """
    q = np.asarray(q, dtype=float)
    # seed: F(z) ~ amp |z|^(-nu) in the far tail; assembled in log space so
    # the amplitude cannot overflow for large nu
    log_amp = math.log(normalizing_constant(nu)) + 0.5 * (nu - 1.0) * math.log(nu)
    with np.errstate(over="ignore"):
        z = -np.exp((log_amp - np.log(q)) / nu)
    z = np.clip(z, -1e300, 0.0)
    zf = z.ravel()
    qf = q.ravel()
    active = np.arange(zf.size)
    for _ in range(120):
        za = zf[active]
        qa = qf[active]
        f = _cdf_std_vec(za, nu) - qa
        dens = _pdf_std_vec(za, nu)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = f / dens
        step = np.where(np.isfinite(step), step, 0.0)
        znew = np.minimum(za - step, 0.0)
        zf[active] = znew
        # residual relative to q: deep-tail targets are far below any useful
        # absolute floor and the seed alone must never pass for them
        done = (np.abs(f) <= 1e-13 * qa) | (np.abs(znew - za) <= 1e-12 * (1.0 + np.abs(za)))
        active = active[~done]
        if active.size == 0:
            break
    return zf.reshape(q.shape)


def _isf_std_vec(s: np.ndarray, nu: float) -> np.ndarray:
    """Upper-tail inverse: z with P(T > z) = s, for s in (0, 0.5]."""
    return -_lower_quantile_std_vec(s, nu)
