"""Linear wavelet regression estimator on a fixed design.

For the Haar scaling function ``phi = 1[0, 1)`` the reproducing kernel
``E_k(x, s) = 2**k E_0(2**k x, 2**k s)`` is ``2**k`` times the indicator
that ``x`` and ``s`` lie in the same dyadic cell of length ``2**-k``. The
integral of the kernel over a design cell ``Gamma_i = [s_{i-1}, s_i)`` is
therefore ``2**k`` times the length of its overlap with that dyadic cell,
which is computed exactly here.
"""
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, column_or_1d

from ._fitting import loglog_fit
from ._io import write_csv
from .exceptions import DegenerateInputError, DomainError, PSDViolationError

__all__ = [
    "DesignPartition",
    "WaveletConfig",
    "WaveletWeights",
    "BiasCurve",
    "HaarWaveletRegressor",
    "build_partition",
    "partition_from_design",
    "cube_root_level",
    "dyadic_cell",
    "haar_weights",
    "estimate",
    "estimator_mean",
    "estimator_variance",
    "weights_variance",
    "variance_ratio",
    "variance_ratio_from_weights",
    "tau_k",
    "bias_curve",
    "REGRESSION_FUNCTIONS",
]

REGRESSION_FUNCTIONS = {
    "linear": lambda x: 2.0 * x - 1.0,
    "sine": lambda x: np.sin(2.0 * np.pi * x),
    "exp": lambda x: np.exp(-2.0 * x),
}


@dataclass(frozen=True)
class DesignPartition:
    """Design points ``x`` and cell boundaries ``s`` with ``s_0 = 0, s_n = 1``."""

    x: np.ndarray
    s: np.ndarray

    @property
    def n(self):
        return self.x.size

    @property
    def lengths(self):
        return np.diff(self.s)


@dataclass(frozen=True)
class WaveletConfig:
    k: int
    scaling: str = "haar"

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 0:
            raise DomainError(f"resolution level must be a nonnegative integer, got {self.k}")
        if self.scaling != "haar":
            raise DomainError(f"unsupported scaling function {self.scaling!r}")


@dataclass(frozen=True)
class WaveletWeights:
    """Kernel integrals ``w_i(x)`` and their positive and negative parts."""

    w: np.ndarray
    w_plus: np.ndarray
    w_minus: np.ndarray
    x_eval: float

    def to_csv(self, dest=None):
        rows = ((i + 1, float(v)) for i, v in enumerate(self.w))
        write_csv(["i", "w"], rows, dest)


def partition_from_design(x):
    """Cells around sorted design points: interior boundaries are midpoints."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size < 2:
        raise DomainError("a design needs at least two points")
    if np.any(np.diff(x) <= 0) or x[0] < 0 or x[-1] > 1:
        raise DomainError("design points must be strictly increasing in [0, 1]")
    s = np.empty(x.size + 1)
    s[0], s[-1] = 0.0, 1.0
    s[1:-1] = 0.5 * (x[:-1] + x[1:])
    return DesignPartition(x=x, s=s)


def build_partition(n):
    """Equispaced design ``x_i = i / n``."""
    if n < 2:
        raise DomainError("n must be at least 2")
    return partition_from_design(np.arange(1, n + 1) / n)


def cube_root_level(n):
    """Dyadic level closest to ``2**k = n**(1/3)``."""
    return int(math.floor(math.log2(n) / 3.0 + 0.5))


def dyadic_cell(x, k):
    """The cell ``[j/2**k, (j+1)/2**k)`` containing ``x``; ``x = 1`` joins the last."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"evaluation point must lie in [0, 1], got {x}")
    scale = 2 ** int(k)
    j = min(int(math.floor(x * scale)), scale - 1)
    return j / scale, (j + 1) / scale


def _as_config(cfg):
    return cfg if isinstance(cfg, WaveletConfig) else WaveletConfig(int(cfg))


def haar_weights(p, cfg, x):
    cfg = _as_config(cfg)
    if 2 ** cfg.k > p.n:
        warnings.warn(f"2**k = {2 ** cfg.k} exceeds n = {p.n}", stacklevel=2)
    lo, hi = dyadic_cell(x, cfg.k)
    overlap = np.minimum(p.s[1:], hi) - np.maximum(p.s[:-1], lo)
    w = (2.0 ** cfg.k) * np.clip(overlap, 0.0, None)
    return WaveletWeights(w=w, w_plus=np.clip(w, 0, None), w_minus=np.clip(-w, 0, None), x_eval=float(x))


def estimate(p, cfg, x, y):
    y = np.asarray(y, dtype=float)
    if y.shape != (p.n,):
        raise DomainError(f"expected {p.n} responses, got shape {y.shape}")
    return float(np.dot(haar_weights(p, cfg, x).w, y))


def _on_design(f, p):
    return np.broadcast_to(np.asarray(f(p.x), dtype=float), p.x.shape)


def estimator_mean(p, cfg, x, f):
    """Expectation of the estimate under zero-mean errors."""
    return float(np.dot(haar_weights(p, cfg, x).w, _on_design(f, p)))


def weights_variance(w, cov):
    """``Var(sum_i w_i eps_i)`` for a tridiagonal error covariance."""
    value = cov.quadratic_form(w)
    if value < -1e-12:
        raise PSDViolationError(f"quadratic form is negative ({value})")
    return max(value, 0.0)


def estimator_variance(p, cfg, x, cov):
    if cov.n != p.n:
        raise DomainError("covariance and partition sizes differ")
    return weights_variance(haar_weights(p, cfg, x).w, cov)


def variance_ratio_from_weights(weights, cov):
    """``(sigma_n / sigma_n^+)**2`` from a weight vector or ``WaveletWeights``."""
    if not isinstance(weights, WaveletWeights):
        w = np.asarray(weights, dtype=float)
        weights = WaveletWeights(w, np.clip(w, 0, None), np.clip(-w, 0, None), math.nan)
    denom = weights_variance(weights.w_plus, cov)
    if denom <= 0:
        raise DegenerateInputError("positive-part weights carry no variance")
    return weights_variance(weights.w, cov) / denom


def variance_ratio(p, cfg, x, cov):
    return variance_ratio_from_weights(haar_weights(p, cfg, x), cov)


def tau_k(nu, k):
    """Wavelet approximation rate for Sobolev order ``nu`` at level ``k``."""
    if not nu > 0.5:
        raise DomainError(f"nu must exceed 1/2, got {nu}")
    if k < 1:
        raise DomainError(f"k must be at least 1, got {k}")
    if nu < 1.5:
        return 2.0 ** (-k * (nu - 0.5))
    if nu == 1.5:
        return math.sqrt(k) * 2.0 ** -k
    return 2.0 ** -k


@dataclass
class BiasCurve:
    ns: list
    ks: list
    bias: list
    reference: list
    slope: float
    intercept: float
    reference_slope: float = field(default=math.nan)

    def rows(self):
        return list(zip(self.ns, self.bias, self.reference))

    def to_csv(self, dest=None):
        write_csv(["n", "bias", "reference"], self.rows(), dest)


BIAS_GRID = np.linspace(0.0, 1.0, 101)


def bias_curve(f, gamma, nu, ns, k_rule=cube_root_level):
    """Sup over a 101-point grid of ``|E f_n(x) - f(x)|`` for each ``n``.

    The reference column is ``n**-gamma + tau_k``; both columns get a
    log-log slope.
    """
    if isinstance(f, str):
        f = REGRESSION_FUNCTIONS[f]
    ns = [int(n) for n in ns]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise DomainError("ns must be strictly increasing")
    ks, bias, ref = [], [], []
    for n in ns:
        p = build_partition(n)
        k = int(k_rule(n))
        fx = _on_design(f, p)
        sup = max(
            abs(float(np.dot(haar_weights(p, k, x).w, fx)) - float(f(x))) for x in BIAS_GRID
        )
        ks.append(k)
        bias.append(sup)
        ref.append(n ** -gamma + tau_k(nu, k))
    if all(b == 0 for b in bias):
        slope, intercept = 0.0, -math.inf
    else:
        slope, intercept = loglog_fit(ns, bias)
    return BiasCurve(ns, ks, bias, ref, slope, intercept, loglog_fit(ns, ref)[0])


class HaarWaveletRegressor(RegressorMixin, BaseEstimator):
    """Haar wavelet estimator ``f_n(x) = sum_i Y_i int_{Gamma_i} E_k(x, s) ds``.

    Parameters
    ----------
    k : int or None
        Resolution level. ``None`` applies ``k_rule`` to the sample size.
    k_rule : callable
        Maps ``n`` to a level when ``k`` is None.
    """

    def __init__(self, k=None, k_rule=cube_root_level):
        self.k = k
        self.k_rule = k_rule

    def fit(self, X, y):
        x = self._points(X)
        y = column_or_1d(y).astype(float)
        if x.shape != y.shape:
            raise DomainError("X and y hold different numbers of samples")
        order = np.argsort(x, kind="stable")
        self.partition_ = partition_from_design(x[order])
        self.y_ = y[order]
        self.k_ = int(self.k_rule(x.size) if self.k is None else self.k)
        self.config_ = WaveletConfig(self.k_)
        self.n_features_in_ = 1
        return self

    @staticmethod
    def _points(X):
        X = check_array(X, ensure_2d=False, dtype=float)
        if X.ndim == 2 and X.shape[1] != 1:
            raise DomainError("the design is one-dimensional; X must have one column")
        return X.ravel()

    def weights(self, x):
        check_is_fitted(self, "partition_")
        return haar_weights(self.partition_, self.config_, float(x))

    def predict(self, X):
        check_is_fitted(self, "partition_")
        return np.array(
            [np.dot(haar_weights(self.partition_, self.config_, x).w, self.y_) for x in self._points(X)]
        )

    def predict_variance(self, X, cov):
        """Exact variance of the estimate at each point under ``cov``."""
        check_is_fitted(self, "partition_")
        return np.array(
            [estimator_variance(self.partition_, self.config_, x, cov) for x in self._points(X)]
        )
