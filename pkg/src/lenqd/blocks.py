"""Bernstein big-block / small-block decomposition of a standardised sum.

Indices run from 1 to n. With ``p = [n**(2/3)]``, ``q = [n**(1/3)]`` and
``k = [n / (p + q)]``, block ``j = 0..k-1`` covers big indices
``j(p+q)+1 .. j(p+q)+p`` followed by small indices ``j(p+q)+p+1 ..
(j+1)(p+q)``; the remainder is ``k(p+q)+1 .. n``. Ranges are stored as
inclusive 1-based ``(first, last)`` pairs; an empty range has
``last < first``.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from ._fitting import loglog_fit
from ._io import write_csv
from ._parallel import replicate_map
from .dependence import ma1_covariance, sample_ma1
from .exceptions import DomainError

__all__ = [
    "BlockScheme",
    "BlockSums",
    "BlockDiagnostics",
    "DecayTable",
    "iroot_floor",
    "block_scheme",
    "block_sums",
    "exact_variances",
    "decay_diagnostics",
]


def iroot_floor(n, num, den):
    """Largest integer ``r`` with ``r**den <= n**num`` (exact integer arithmetic)."""
    target = int(n) ** num
    r = int(round(target ** (1.0 / den)))
    while r ** den > target:
        r -= 1
    while (r + 1) ** den <= target:
        r += 1
    return r


@dataclass(frozen=True)
class BlockScheme:
    n: int
    p: int
    q: int
    k: int
    big_ranges: tuple
    small_ranges: tuple
    remainder_range: tuple

    def labels(self):
        """Per-index tag: 0 big, 1 small, 2 remainder (position ``i - 1``)."""
        out = np.full(self.n, -1, dtype=int)
        for tag, ranges in ((0, self.big_ranges), (1, self.small_ranges), (2, (self.remainder_range,))):
            for first, last in ranges:
                out[first - 1:last] = tag
        return out


def block_scheme(n):
    n = int(n)
    if n < 1:
        raise DomainError("n must be at least 1")
    p = iroot_floor(n, 2, 3)
    q = iroot_floor(n, 1, 3)
    k = n // (p + q)
    big = tuple((j * (p + q) + 1, j * (p + q) + p) for j in range(k))
    small = tuple((j * (p + q) + p + 1, (j + 1) * (p + q)) for j in range(k))
    return BlockScheme(n, p, q, k, big, small, (k * (p + q) + 1, n))


@dataclass
class BlockSums:
    eta: np.ndarray
    xi: np.ndarray
    zeta: float

    @property
    def sigma_prime(self):
        return float(self.eta.sum())

    @property
    def sigma_dprime(self):
        return float(self.xi.sum())

    @property
    def sigma_tprime(self):
        return self.zeta

    @property
    def total(self):
        return self.sigma_prime + self.sigma_dprime + self.sigma_tprime


def block_sums(scheme, x, v_n):
    """Big-block sums ``eta_j``, small-block sums ``xi_j`` and remainder ``zeta``
    of ``Z_i = x_i / v_n``."""
    if not v_n > 0:
        raise DomainError("v_n must be positive")
    x = np.asarray(x, dtype=float)
    if x.shape != (scheme.n,):
        raise DomainError(f"expected a series of length {scheme.n}")
    z = x / v_n
    p, q, k = scheme.p, scheme.q, scheme.k
    head = z[: k * (p + q)].reshape(k, p + q)
    return BlockSums(
        eta=head[:, :p].sum(axis=1),
        xi=head[:, p:].sum(axis=1),
        zeta=float(z[k * (p + q):].sum()),
    )


def _range_cov(a, b, cov):
    """Covariance of the sums over two disjoint index ranges (tridiagonal model)."""
    (a1, a2), (b1, b2) = sorted((a, b))
    if a2 < a1 or b2 < b1:
        return 0.0
    return cov.off if b1 == a2 + 1 else 0.0


def _range_var(r, cov):
    return cov.sum_variance(r[1] - r[0] + 1)


def _family_variance(ranges, cov):
    var = sum(_range_var(r, cov) for r in ranges)
    cross = sum(_range_cov(ranges[i], ranges[j], cov)
                for i in range(len(ranges)) for j in range(i + 1, len(ranges)))
    return var, cross


@dataclass(frozen=True)
class BlockDiagnostics:
    """Exact second-moment quantities of the decomposition.

    All block quantities are in units of the standardised sum, i.e. divided
    by ``v_n_sq``.
    """

    v_n_sq: float
    s_n_sq: float
    gamma_n: float
    sigma0_sq_hat: float
    second_moment_prime: float
    second_moment_dprime: float
    second_moment_tprime: float


def exact_variances(scheme, cov):
    if cov.n != scheme.n:
        raise DomainError("covariance and scheme sizes differ")
    v2 = cov.sum_variance()
    if not v2 > 0:
        raise DomainError(f"Var(S_n) = {v2} is not positive")
    big_var, big_cross = _family_variance(scheme.big_ranges, cov)
    small_var, small_cross = _family_variance(scheme.small_ranges, cov)
    return BlockDiagnostics(
        v_n_sq=v2,
        s_n_sq=big_var / v2,
        gamma_n=big_cross / v2,
        sigma0_sq_hat=v2 / scheme.n,
        second_moment_prime=(big_var + 2.0 * big_cross) / v2,
        second_moment_dprime=(small_var + 2.0 * small_cross) / v2,
        second_moment_tprime=_range_var(scheme.remainder_range, cov) / v2,
    )


@dataclass
class DecayTable:
    ns: list
    abs_sn2_minus_1: list
    mean_sq_sigma2: list
    mean_sq_sigma3: list
    exact_sq_sigma2: list
    exact_sq_sigma3: list
    slopes: dict = field(default_factory=dict)

    HEADER = ("n", "abs_sn2_minus_1", "mean_sq_sigma2", "mean_sq_sigma3")

    def rows(self):
        return list(zip(self.ns, self.abs_sn2_minus_1, self.mean_sq_sigma2, self.mean_sq_sigma3))

    def to_csv(self, dest=None):
        write_csv(self.HEADER, self.rows(), dest)


def _slope(ns, values):
    values = np.asarray(values, dtype=float)
    if len(ns) < 2 or np.any(values <= 0):
        return math.nan
    return loglog_fit(ns, values)[0]


def decay_diagnostics(params, ns, reps, seed, innovations="gaussian", parallel=1):
    """Monte Carlo second moments of the small-block and remainder sums.

    ``|s_n^2 - 1|`` is exact. Replicate ``r`` at sample size ``n`` uses the
    stream ``(seed, stream=n, replicate=r)``.
    """
    ns = [int(n) for n in ns]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise DomainError("ns must be strictly increasing")
    if reps < 100:
        raise DomainError("decay diagnostics need at least 100 replicates")
    table = DecayTable([], [], [], [], [], [])
    for n in ns:
        scheme = block_scheme(n)
        exact = exact_variances(scheme, ma1_covariance(params, n))
        v_n = math.sqrt(exact.v_n_sq)

        def one(r, n=n, scheme=scheme, v_n=v_n):
            x = sample_ma1(params, n, seed, replicate=r, stream=n, innovations=innovations)
            sums = block_sums(scheme, x, v_n)
            return sums.sigma_dprime ** 2, sums.sigma_tprime ** 2

        moments = replicate_map(one, reps, parallel)
        table.ns.append(n)
        table.abs_sn2_minus_1.append(abs(exact.s_n_sq - 1.0))
        table.mean_sq_sigma2.append(float(moments[:, 0].mean()))
        table.mean_sq_sigma3.append(float(moments[:, 1].mean()))
        table.exact_sq_sigma2.append(exact.second_moment_dprime)
        table.exact_sq_sigma3.append(exact.second_moment_tprime)
    table.slopes = {
        name: _slope(ns, getattr(table, name))
        for name in ("abs_sn2_minus_1", "mean_sq_sigma2", "mean_sq_sigma3")
    }
    return table
