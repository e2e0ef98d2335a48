"""Moments of folded and zero-truncated Student t variates.

Closed forms for the mean, raw second moment, and variance of |X| and of
X | X > lower when X follows a location-scale Student t law, together with
the quadrature and Monte Carlo oracles that verify them.
"""

from .errors import NonexistentMomentError, QuadratureError
from .folded import (
    FoldedT,
    Moments,
    mean_folded,
    moments_folded,
    pdf_folded,
    sample_folded,
    second_moment_folded,
    variance_folded,
    variance_folded_central,
)
from .oracle import (
    McConfig,
    McEstimate,
    QuadratureConfig,
    VerificationEntry,
    VerificationReport,
    mc_moment,
    quad_moment,
    verify_grid,
)
from .specfun import log_gamma, normalizing_constant, reg_inc_beta
from .student import StudentParams, cdf, pdf, prob_positive, quantile, sample
from .truncated import (
    TruncatedT,
    mean_truncated,
    moments_truncated,
    pdf_truncated,
    sample_truncated,
    second_moment_truncated,
    variance_truncated,
)

__version__ = "0.1.0"

__all__ = [
    "FoldedT",
    "McConfig",
    "McEstimate",
    "Moments",
    "NonexistentMomentError",
    "QuadratureConfig",
    "QuadratureError",
    "StudentParams",
    "TruncatedT",
    "VerificationEntry",
    "VerificationReport",
    "cdf",
    "log_gamma",
    "mc_moment",
    "mean_folded",
    "mean_truncated",
    "moments_folded",
    "moments_truncated",
    "normalizing_constant",
    "pdf",
    "pdf_folded",
    "pdf_truncated",
    "prob_positive",
    "quad_moment",
    "quantile",
    "reg_inc_beta",
    "sample",
    "sample_folded",
    "sample_truncated",
    "second_moment_folded",
    "second_moment_truncated",
    "variance_folded",
    "variance_folded_central",
    "variance_truncated",
    "verify_grid",
]
