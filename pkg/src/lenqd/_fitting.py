import numpy as np

from .exceptions import DomainError


def loglog_fit(xs, ys):
    """OLS fit of ``log y`` on ``log x``; returns ``(slope, intercept)``."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.size < 2:
        raise DomainError("need at least two matching (x, y) points")
    if np.any(xs <= 0) or np.any(ys <= 0):
        raise DomainError("log-log fit needs strictly positive values")
    slope, intercept = np.polyfit(np.log(xs), np.log(ys), 1)
    return float(slope), float(intercept)
