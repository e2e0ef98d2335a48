"""Exception types shared across the library."""

__all__ = ["NonexistentMomentError", "QuadratureError"]


class NonexistentMomentError(ValueError):
    """Raised when a moment is requested outside its existence domain.

    The k-th moment of a Student t variate exists only for nu > k, so asking
    for a mean at nu <= 1 or a variance at nu <= 2 is a typed error rather
    than a silent NaN.
    """


class QuadratureError(RuntimeError):
    """Raised when adaptive quadrature fails to reach the requested tolerance
    within its subdivision budget. The oracle never returns a value it cannot
    vouch for."""
