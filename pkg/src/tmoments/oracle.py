"""Independent verification machinery: quadrature and Monte Carlo oracles.

The quadrature oracle evaluates the defining moment integrals directly. The
substitution x = mu + sigma sqrt(nu) tan(theta) maps the line to
(-pi/2, pi/2) and turns the density kernel into C(nu) sqrt(nu) cos^(nu-1),
which tames the polynomial tails that would bias any finite-cutoff scheme
for nu <= 3. Panels are refined adaptively with an embedded 7-point Gauss /
15-point Kronrod pair; past a standardized |z| of 1e5 the remaining tail is
added from the density's exact expansion at infinity (see _TAIL_CUT).

The Monte Carlo oracle estimates the same moments from seeded draws and
reports the standard error alongside. Both are deterministic for a fixed
configuration.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .errors import NonexistentMomentError, QuadratureError
from .folded import FoldedT, mean_folded, sample_folded, variance_folded
from .specfun import normalizing_constant
from .student import StudentParams, sample
from .truncated import (
    TruncatedT,
    mean_truncated,
    sample_truncated,
    second_moment_truncated,
    variance_truncated,
)

__all__ = [
    "QuadratureConfig",
    "McConfig",
    "McEstimate",
    "VerificationEntry",
    "SkippedEntry",
    "VerificationReport",
    "quad_moment",
    "mc_moment",
    "verify_grid",
    "QUANTITIES",
]

Distribution = Union[StudentParams, FoldedT, TruncatedT]

QUANTITIES = ("folded-mean", "folded-var", "trunc-mean", "trunc-second", "trunc-var")


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and budget for the adaptive integrator."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 2000

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise ValueError("quadrature tolerances must be > 0")
        if self.max_subdivisions < 10:
            raise ValueError("max_subdivisions must be >= 10")


@dataclass(frozen=True)
class McConfig:
    """Sample count and seed for the Monte Carlo oracle."""

    n: int = 1_000_000
    seed: int = 42

    def __post_init__(self) -> None:
        if self.n < 100:
            raise ValueError(f"Monte Carlo needs n >= 100, got {self.n!r}")


@dataclass(frozen=True)
class McEstimate:
    estimate: float
    stderr: float


# 15-point Kronrod rule on [-1, 1] with the embedded 7-point Gauss rule on
# its odd-index nodes (QUADPACK dqk15 constants).
_KRONROD_NODES_HALF = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
)
_KRONROD_WEIGHTS_HALF = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
)
_KRONROD_WEIGHT_CENTER = 0.209482141084727828012999174891714
_GAUSS_WEIGHTS_HALF = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
)
_GAUSS_WEIGHT_CENTER = 0.417959183673469387755102040816327

_NODES = np.array(
    [-x for x in _KRONROD_NODES_HALF] + [0.0] + list(reversed(_KRONROD_NODES_HALF))
)
_WK = np.array(
    list(_KRONROD_WEIGHTS_HALF) + [_KRONROD_WEIGHT_CENTER] + list(reversed(_KRONROD_WEIGHTS_HALF))
)
_WG = np.zeros(15)
_WG[1:14:2] = (
    list(_GAUSS_WEIGHTS_HALF) + [_GAUSS_WEIGHT_CENTER] + list(reversed(_GAUSS_WEIGHTS_HALF))
)


def _gk15(f: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> tuple[float, float]:
    """One Gauss-Kronrod panel: (Kronrod estimate, error estimate).

    The error model is QUADPACK's: |K - G| rescaled against the panel's
    total variation, so it credits superconvergence on smooth panels but
    stays conservative next to an endpoint singularity, where plain |K - G|
    underestimates by a constant factor.
    """
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    y = f(mid + half * _NODES)
    k = half * float(np.dot(_WK, y))
    g = half * float(np.dot(_WG, y))
    err = abs(k - g)
    resasc = abs(half) * float(np.dot(_WK, np.abs(y - k / (2.0 * half if half else 1.0))))
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    return k, err


def _adaptive(
    f: Callable[[np.ndarray], np.ndarray],
    breakpoints: Sequence[float],
    cfg: QuadratureConfig,
) -> float:
    """Adaptively refine the worst panel until the summed error estimate
    meets max(abs_tol, rel_tol * |integral|) or the budget runs out."""
    heap: list[tuple[float, float, float, float]] = []  # (-err, a, b, val)
    total = 0.0
    total_err = 0.0
    for a, b in zip(breakpoints[:-1], breakpoints[1:]):
        val, err = _gk15(f, a, b)
        total += val
        total_err += err
        heapq.heappush(heap, (-err, a, b, val))
    for _ in range(cfg.max_subdivisions):
        if total_err <= max(cfg.abs_tol, cfg.rel_tol * abs(total)):
            return total
        neg_err, a, b, val = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        left_val, left_err = _gk15(f, a, mid)
        right_val, right_err = _gk15(f, mid, b)
        total += left_val + right_val - val
        total_err += left_err + right_err + neg_err  # neg_err = -old_err
        heapq.heappush(heap, (-left_err, a, mid, left_val))
        heapq.heappush(heap, (-right_err, mid, b, right_val))
    if total_err <= max(cfg.abs_tol, cfg.rel_tol * abs(total)):
        return total
    raise QuadratureError(
        f"no convergence after {cfg.max_subdivisions} subdivisions "
        f"(error estimate {total_err:.3e} for integral {total:.6e})"
    )


def _theta_integrand(
    mu: float, nu: float, sigma: float, power: int, absolute: bool
) -> Callable[[np.ndarray], np.ndarray]:
    """x^power * density under x = mu + sigma sqrt(nu) tan(theta).

    Written as (mu cos + sigma sqrt(nu) sin)^power cos^(nu-1-power) so the
    endpoint theta -> pi/2 neither overflows tan nor multiplies inf by 0.
    """
    const = normalizing_constant(nu) * math.sqrt(nu)
    root = sigma * math.sqrt(nu)

    def g(theta: np.ndarray) -> np.ndarray:
        c = np.cos(theta)
        s = np.sin(theta)
        poly = mu * c + root * s
        if absolute:
            poly = np.abs(poly)
        if power == 0:
            return const * c ** (nu - 1.0)
        return const * poly**power * c ** (nu - 1.0 - power)

    return g


def _theta_of_x(x: float, mu: float, nu: float, sigma: float) -> float:
    return math.atan((x - mu) / (sigma * math.sqrt(nu)))


# Standardized cut for the analytic tails: beyond |z| = 1e5 the density's
# expansion at infinity is exact to ~1e-28 relative, while the adaptive
# panels stay clear of the theta -> pi/2 resolution limit of doubles (the
# unrepresentable sliver there holds ~1e-8 of a nu - power = 0.5 moment,
# which the error estimator cannot see).
_TAIL_CUT = 1e5


def _upper_tail_moment(mu: float, nu: float, sigma: float, power: int, x_cut: float) -> float:
    """Integral of x^power * density over (x_cut, inf), by expanding the
    density at infinity in w = sigma sqrt(nu) / (x - mu) and integrating the
    series term by term. Requires x_cut - mu >= _TAIL_CUT sigma sqrt(nu)."""
    root = sigma * math.sqrt(nu)
    w = root / (x_cut - mu)
    s = 0.5 * (nu + 1.0)
    series = (1.0, -s, 0.5 * s * (s + 1.0), -s * (s + 1.0) * (s + 2.0) / 6.0)
    total = 0.0
    for j in range(power + 1):
        coef = math.comb(power, j) * mu ** (power - j) * root**j
        for i, d_i in enumerate(series):
            exponent = nu - j + 2 * i
            total += coef * d_i * w**exponent / exponent
    return normalizing_constant(nu) * math.sqrt(nu) * total


def _require_moment(nu: float, power: int) -> None:
    if power not in (0, 1, 2):
        raise ValueError(f"power must be one of 0, 1, 2, got {power!r}")
    if power >= 1 and nu <= power:
        raise NonexistentMomentError(
            f"moment of order {power} requires nu > {power}, got nu={nu!r}"
        )


def quad_moment(dist: Distribution, power: int, cfg: QuadratureConfig | None = None) -> float:
    """Integral of x^power against the distribution's density.

    Accepts the plain variate (full line), the folded variate (|x|^power on
    the full line), or the truncated variate (x^power on (lower, inf),
    renormalized by the survival mass).
    """
    cfg = cfg or QuadratureConfig()
    if isinstance(dist, StudentParams):
        p, lower, absolute, renorm = dist, None, False, False
    elif isinstance(dist, FoldedT):
        p, lower, absolute, renorm = dist.params, None, True, False
    elif isinstance(dist, TruncatedT):
        p, lower, absolute, renorm = dist.params, dist.lower, False, True
    else:
        raise TypeError(f"unsupported distribution object: {dist!r}")
    _require_moment(p.nu, power)
    root = p.sigma * math.sqrt(p.nu)
    x_hi = max(0.0, p.mu) + _TAIL_CUT * root
    if lower is not None and lower > x_hi:
        x_hi = lower  # everything beyond the cut: the tail series is exact there
    g = _theta_integrand(p.mu, p.nu, p.sigma, power, absolute=absolute)

    total = _upper_tail_moment(p.mu, p.nu, p.sigma, power, x_hi)
    if lower is None:
        # both tails analytic; reflect the lower one onto the upper form
        x_lo = min(0.0, p.mu) - _TAIL_CUT * root
        sign = 1.0 if (absolute or power % 2 == 0) else -1.0
        total += sign * _upper_tail_moment(-p.mu, p.nu, p.sigma, power, -x_lo)
        theta_lo = _theta_of_x(x_lo, p.mu, p.nu, p.sigma)
    else:
        theta_lo = _theta_of_x(lower, p.mu, p.nu, p.sigma)
    theta_hi = _theta_of_x(x_hi, p.mu, p.nu, p.sigma)
    if theta_lo < theta_hi:
        interior = {_theta_of_x(p.mu, p.mu, p.nu, p.sigma)}
        if absolute:
            interior.add(_theta_of_x(0.0, p.mu, p.nu, p.sigma))  # the |x| kink
        total += _adaptive(g, _split_points(theta_lo, theta_hi, interior), cfg)
    if renorm:
        assert isinstance(dist, TruncatedT)
        return total / dist.survival_at_lower()
    return total


def _split_points(lo: float, hi: float, interior: Iterable[float]) -> list[float]:
    """Panel breakpoints: the endpoints, any interior markers, and enough
    uniform padding to give the refiner a fair first look."""
    pts = {lo, hi}
    for p in interior:
        if lo < p < hi:
            pts.add(p)
    base = sorted(pts)
    out: list[float] = []
    for a, b in zip(base[:-1], base[1:]):
        out.extend(np.linspace(a, b, 5)[:-1])
    out.append(hi)
    return out


def _draws(dist: Distribution, n: int, seed: int) -> np.ndarray:
    if isinstance(dist, StudentParams):
        return sample(dist, n, seed)
    if isinstance(dist, FoldedT):
        return sample_folded(dist, n, seed)
    if isinstance(dist, TruncatedT):
        return sample_truncated(dist, n, seed)
    raise TypeError(f"unsupported distribution object: {dist!r}")


def _dist_nu(dist: Distribution) -> float:
    return dist.nu if isinstance(dist, StudentParams) else dist.params.nu


def mc_moment(dist: Distribution, power: int, cfg: McConfig | None = None) -> McEstimate:
    """Sample mean of x^power over seeded draws, with its standard error."""
    cfg = cfg or McConfig()
    _require_moment(_dist_nu(dist), power)
    v = _draws(dist, cfg.n, cfg.seed) ** power
    return McEstimate(
        estimate=float(v.mean()),
        stderr=float(v.std(ddof=1) / math.sqrt(cfg.n)),
    )


@dataclass(frozen=True)
class VerificationEntry:
    mu: float
    nu: float
    quantity: str
    closed_form: float
    quadrature: float
    mc_estimate: float
    mc_stderr: float
    rel_err: float
    passed: bool


@dataclass(frozen=True)
class SkippedEntry:
    mu: float
    nu: float
    quantity: str
    reason: str


@dataclass(frozen=True)
class VerificationReport:
    entries: tuple[VerificationEntry, ...]
    skipped: tuple[SkippedEntry, ...] = ()
    overall_pass: bool = field(default=False)

    @staticmethod
    def build(
        entries: Sequence[VerificationEntry], skipped: Sequence[SkippedEntry]
    ) -> "VerificationReport":
        return VerificationReport(
            entries=tuple(entries),
            skipped=tuple(skipped),
            overall_pass=all(e.passed for e in entries),
        )


def _rel_err(closed: float, reference: float) -> float:
    return abs(closed - reference) / max(abs(reference), 1e-300)


def _var_stderr(v: np.ndarray) -> float:
    # delta-method standard error of the sample variance:
    # Var(s^2) ~ (m4 - s^4 (n-3)/(n-1)) / n with m4 the central 4th moment
    n = v.size
    centered = v - v.mean()
    s2 = float(centered @ centered) / (n - 1)
    m4 = float(np.mean(centered**4))
    return math.sqrt(max(m4 - s2 * s2 * (n - 3) / (n - 1), 0.0) / n)


def verify_grid(
    mu_grid: Sequence[float],
    nu_grid: Sequence[float],
    quantities: Sequence[str] = QUANTITIES,
    qcfg: QuadratureConfig | None = None,
    mcfg: McConfig | None = None,
    threshold: float = 1e-8,
    closed_form_offset: float = 0.0,
) -> VerificationReport:
    """Compare every closed form against both oracles over a parameter grid.

    One entry per (mu, nu, quantity), ordered that way; an entry passes when
    the quadrature relative error is below ``threshold`` and the closed form
    sits within 4 standard errors of the Monte Carlo estimate. Grid points
    whose moment does not exist are recorded as skipped, not failed.

    ``closed_form_offset`` is a fault-injection hook for tests: it shifts
    every closed-form value before comparison and must stay 0.0 in real use.
    """
    if len(mu_grid) == 0 or len(nu_grid) == 0:
        raise ValueError("verification grids must be non-empty")
    if threshold <= 0.0:
        raise ValueError(f"threshold must be > 0, got {threshold!r}")
    unknown = set(quantities) - set(QUANTITIES)
    if unknown:
        raise ValueError(f"unknown quantities: {sorted(unknown)}")
    qcfg = qcfg or QuadratureConfig()
    mcfg = mcfg or McConfig()

    entries: list[VerificationEntry] = []
    skipped: list[SkippedEntry] = []
    for mu in sorted(mu_grid):
        for nu in sorted(nu_grid):
            cache: dict = {}
            for quantity in QUANTITIES:
                if quantity not in quantities:
                    continue
                need_nu = 1.0 if quantity in ("folded-mean", "trunc-mean") else 2.0
                if nu <= need_nu:
                    skipped.append(
                        SkippedEntry(mu, nu, quantity, f"moment requires nu > {need_nu:g}")
                    )
                    continue
                closed, quad, mc_est, mc_se = _verify_point(mu, nu, quantity, qcfg, mcfg, cache)
                closed += closed_form_offset
                rel = _rel_err(closed, quad)
                ok = rel < threshold and abs(closed - mc_est) < 4.0 * mc_se
                entries.append(
                    VerificationEntry(mu, nu, quantity, closed, quad, mc_est, mc_se, rel, ok)
                )
    return VerificationReport.build(entries, skipped)


def _verify_point(
    mu: float,
    nu: float,
    quantity: str,
    qcfg: QuadratureConfig,
    mcfg: McConfig,
    cache: dict,
) -> tuple[float, float, float, float]:
    """(closed form, quadrature, mc estimate, mc stderr) for one grid entry.

    The cache holds draws and quadrature moments shared between quantities
    of the same (mu, nu); results equal calling the public one-shot ops."""
    params = StudentParams(mu, nu)
    dist: Distribution
    if quantity.startswith("folded"):
        dist = FoldedT(params)
        closed = mean_folded(dist) if quantity == "folded-mean" else variance_folded(dist)
    else:
        dist = TruncatedT(params)
        closed = {
            "trunc-mean": mean_truncated,
            "trunc-second": second_moment_truncated,
            "trunc-var": variance_truncated,
        }[quantity](dist)

    kind = "folded" if quantity.startswith("folded") else "trunc"

    def quad_of(power: int) -> float:
        key = ("quad", kind, power)
        if key not in cache:
            cache[key] = quad_moment(dist, power, qcfg)
        return cache[key]

    draws_key = ("draws", kind)
    if draws_key not in cache:
        cache[draws_key] = _draws(dist, mcfg.n, mcfg.seed)
    v = cache[draws_key]

    if quantity in ("folded-mean", "trunc-mean"):
        quad = quad_of(1)
        mc_est = float(v.mean())
        mc_se = float(v.std(ddof=1) / math.sqrt(v.size))
    elif quantity == "trunc-second":
        quad = quad_of(2)
        sq = v**2
        mc_est = float(sq.mean())
        mc_se = float(sq.std(ddof=1) / math.sqrt(v.size))
    else:  # variances
        quad = quad_of(2) - quad_of(1) ** 2
        mc_est = float(v.var(ddof=1))
        mc_se = _var_stderr(v)
    return closed, quad, mc_est, mc_se
