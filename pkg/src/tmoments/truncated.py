"""Student t variate truncated to a half-line: X conditioned on X > lower.

For the zero-truncation of a scale-1 variate, with P = P(X > 0):

    f+(x)    = f(x) / P  on x > 0
    E[X+]    = mu + C(nu) (nu/(nu-1)) / (P [1 + mu^2/nu]^((nu-1)/2))
    E[X+^2]  = 2 mu E[X+] - (nu + mu^2)
               + nu (C(nu)/C(nu-2)) sqrt(nu/(nu-2)) Q / P
    var(X+)  = E[X+^2] - E[X+]^2

where Q = P(T > -mu sqrt((nu-2)/nu)) for a standard t variate T with nu-2
degrees of freedom. The sqrt(nu/(nu-2)) scale on the nu-2 variate comes from
rewriting 1 + (x-mu)^2/nu as 1 + (x-mu)^2 / ((nu-2) (nu/(nu-2))).

A sign variant of the second moment that is sometimes quoted, with constant
term +(nu - mu^2) instead of -(nu + mu^2), fails the symmetry requirement
E[X+^2] = nu/(nu-2) at mu = 0 and disagrees with direct quadrature by orders
of magnitude; see docs/derivations.md. The quadrature oracle adjudicates.

A general truncation point L reduces to the zero form: X truncated at L is
(X - L) truncated at 0 with location mu - L, shifted back by L. A general
scale reduces as in the folded module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonexistentMomentError
from .folded import Moments
from .specfun import log_gamma, normalizing_constant
from .student import (
    StudentParams,
    _isf_std_vec,
    _sample_with,
    pdf,
    prob_positive,
)

__all__ = [
    "TruncatedT",
    "pdf_truncated",
    "mean_truncated",
    "second_moment_truncated",
    "variance_truncated",
    "moments_truncated",
    "sample_truncated",
]

# Below this survival probability the rejection sampler is abandoned for
# inverse-CDF sampling on the restricted uniform range.
_REJECTION_MIN_ACCEPT = 0.1


@dataclass(frozen=True)
class TruncatedT:
    """X | X > lower for X ~ t(nu, mu, sigma); lower defaults to 0."""

    params: StudentParams
    lower: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.lower):
            raise ValueError(f"truncation point must be finite, got {self.lower!r}")

    def _std_location(self) -> float:
        """Location of the shifted, standardized zero-truncation."""
        return (self.params.mu - self.lower) / self.params.sigma

    def survival_at_lower(self) -> float:
        """P(X > lower), the renormalizing mass."""
        return prob_positive(StudentParams(self._std_location(), self.params.nu))


def pdf_truncated(x: float, t: TruncatedT) -> float:
    """f(x)/P(X > lower) on x > lower, zero at and below the cut."""
    if x <= t.lower:
        return 0.0
    return pdf(x, t.params) / t.survival_at_lower()


def _mean_trunc_std(m: float, nu: float) -> float:
    p_pos = prob_positive(StudentParams(m, nu))
    decay = math.exp(-0.5 * (nu - 1.0) * math.log1p(m * m / nu))
    return m + normalizing_constant(nu) * (nu / (nu - 1.0)) * decay / p_pos


def _second_trunc_std(m: float, nu: float) -> float:
    p_pos = prob_positive(StudentParams(m, nu))
    # C(nu)/C(nu-2) as one exponentiated log-gamma difference (overflow-safe)
    ratio = math.exp(
        log_gamma(0.5 * (nu + 1.0)) - log_gamma(0.5 * nu)
        - log_gamma(0.5 * (nu - 1.0)) + log_gamma(0.5 * (nu - 2.0))
        + 0.5 * (math.log(nu - 2.0) - math.log(nu))
    )
    q_shift = prob_positive(StudentParams(m * math.sqrt((nu - 2.0) / nu), nu - 2.0))
    return (
        2.0 * m * _mean_trunc_std(m, nu)
        - (nu + m * m)
        + nu * ratio * math.sqrt(nu / (nu - 2.0)) * q_shift / p_pos
    )


def mean_truncated(t: TruncatedT) -> float:
    """E[X | X > lower]; always above both mu and lower. Requires nu > 1."""
    p = t.params
    if p.nu <= 1.0:
        raise NonexistentMomentError(f"truncated mean requires nu > 1, got nu={p.nu!r}")
    return t.lower + p.sigma * _mean_trunc_std(t._std_location(), p.nu)


def second_moment_truncated(t: TruncatedT) -> float:
    """E[X^2 | X > lower]. Requires nu > 2."""
    p = t.params
    if p.nu <= 2.0:
        raise NonexistentMomentError(
            f"truncated second moment requires nu > 2, got nu={p.nu!r}"
        )
    m = t._std_location()
    z1 = _mean_trunc_std(m, p.nu)
    z2 = _second_trunc_std(m, p.nu)
    return t.lower**2 + 2.0 * t.lower * p.sigma * z1 + p.sigma**2 * z2


def variance_truncated(t: TruncatedT) -> float:
    """var(X | X > lower), difference of the two closed forms. Requires nu > 2.

    Computed in shifted coordinates (variance is shift-invariant), which
    avoids the lower^2 cancellation of the raw difference.
    """
    p = t.params
    if p.nu <= 2.0:
        raise NonexistentMomentError(f"truncated variance requires nu > 2, got nu={p.nu!r}")
    m = t._std_location()
    z1 = _mean_trunc_std(m, p.nu)
    z2 = _second_trunc_std(m, p.nu)
    return p.sigma**2 * (z2 - z1 * z1)


def moments_truncated(t: TruncatedT) -> Moments:
    """All three moments in one record. Requires nu > 2."""
    mean = mean_truncated(t)
    second = second_moment_truncated(t)
    return Moments(mean=mean, second_raw=second, variance=second - mean**2)


def sample_truncated(t: TruncatedT, n: int, seed: int) -> np.ndarray:
    """``n`` i.i.d. draws from the truncated law, deterministic in the seed.

    Rejection from the full t when the acceptance mass is at least 10%;
    otherwise inverse-CDF on the restricted uniform range, where rejection
    efficiency has collapsed.
    """
    if n < 1:
        raise ValueError(f"sample size must be >= 1, got {n!r}")
    p = t.params
    p_acc = t.survival_at_lower()
    rng = np.random.default_rng(seed)
    if p_acc >= _REJECTION_MIN_ACCEPT:
        out = np.empty(n)
        filled = 0
        while filled < n:
            want = n - filled
            batch = int(want / p_acc * 1.2) + 64
            draws = _sample_with(rng, p, batch)
            kept = draws[draws > t.lower]
            take = min(kept.size, want)
            out[filled : filled + take] = kept[:take]
            filled += take
        return out
    # survival targets uniform on (0, p_acc]; invert the upper tail directly
    u = rng.random(n)
    s = (1.0 - u) * p_acc
    x = p.mu + p.sigma * _isf_std_vec(s, p.nu)
    # the root finder's last ulp may land on the cut; the support is open
    return np.maximum(x, np.nextafter(t.lower, math.inf))
