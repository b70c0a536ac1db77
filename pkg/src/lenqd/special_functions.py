"""Standard normal distribution function and its inverse.

Both functions accept scalars or array-likes. Scalars come back as Python
floats, arrays as ``float64`` ndarrays of the same shape.
"""
import math

import numpy as np
from scipy import special

from .exceptions import DomainError

__all__ = ["std_normal_cdf", "std_normal_pdf", "std_normal_quantile"]

_SQRT_HALF = math.sqrt(0.5)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _unwrap(values, scalar):
    return float(values) if scalar else values


def std_normal_pdf(x):
    x = np.asarray(x, dtype=float)
    return _unwrap(_INV_SQRT_2PI * np.exp(-0.5 * x * x), x.ndim == 0)


def std_normal_cdf(x):
    """Phi(x) evaluated through the complementary error function.

    ``0.5 * erfc(-x / sqrt(2))`` keeps full relative accuracy in the lower
    tail and is accurate to a few ulps in the upper tail.

    Raises
    ------
    DomainError
        If any input is NaN or infinite.
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("std_normal_cdf requires finite input")
    return _unwrap(0.5 * special.erfc(-x * _SQRT_HALF), x.ndim == 0)


def _upper_tail(x):
    return 0.5 * special.erfc(x * _SQRT_HALF)


def std_normal_quantile(p):
    """Inverse of :func:`std_normal_cdf` on the open unit interval.

    A rational-approximation start (``scipy.special.ndtri``) is polished by
    two Newton steps on the CDF. Each step works on whichever tail is
    closer so that the residual is never formed by cancelling two numbers
    close to one.

    Raises
    ------
    DomainError
        If any ``p`` is outside ``(0, 1)``.
    """
    p = np.asarray(p, dtype=float)
    if not np.all((p > 0.0) & (p < 1.0)):
        raise DomainError("std_normal_quantile requires 0 < p < 1")
    x = special.ndtri(p)
    lower = p <= 0.5
    q = np.where(lower, p, 1.0 - p)
    for _ in range(2):
        # residual of the tail probability in the orientation of q
        tail = np.where(lower, _upper_tail(-x), _upper_tail(x))
        dens = _INV_SQRT_2PI * np.exp(-0.5 * x * x)
        step = (tail - q) / dens
        x = np.where(lower, x - step, x + step)
    return _unwrap(x, p.ndim == 0)
