"""MA(1) error models and brute-force ENQD / LENQD checks.

The Gaussian MA(1) sequence ``X_i = W_i - b W_{i-1}`` has a tridiagonal
covariance and is negatively dependent for ``b > 0``. The checkers below
work on finite discrete joint laws, where the orthant inequalities only
need to be tested on the grid of atom coordinates.
"""
import csv
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import rng
from .exceptions import CapacityError, DomainError

__all__ = [
    "MA1Params",
    "DEFAULT_PARAMS",
    "TridiagCovariance",
    "DiscreteJoint",
    "DominatingConstant",
    "ma1_covariance",
    "sample_ma1",
    "covariance_tail_sum",
    "enqd_min_constant",
    "lenqd_min_constant",
    "ma1_discrete_joint",
]

MAX_ATOMS = 10_000
MAX_LENQD_DIM = 6
# atoms pushed forward, summed over every (A, B, coefficients, sign) case
MAX_LENQD_WORK = 50_000_000


@dataclass(frozen=True)
class MA1Params:
    """Parameters of ``X_i = W_i - b W_{i-1}`` with ``W ~ (mu_w, sigma_w**2)``."""

    b: float = 0.9
    sigma_w: float = 0.7
    mu_w: float = 0.0

    def __post_init__(self):
        if not (self.sigma_w > 0 and math.isfinite(self.sigma_w)):
            raise DomainError(f"sigma_w must be positive, got {self.sigma_w}")
        if not (math.isfinite(self.b) and math.isfinite(self.mu_w)):
            raise DomainError("b and mu_w must be finite")


DEFAULT_PARAMS = MA1Params(b=0.9, sigma_w=0.7, mu_w=0.0)


@dataclass(frozen=True)
class TridiagCovariance:
    """Stationary covariance with nonzero entries only at lags 0 and 1."""

    n: int
    diag: float
    off: float

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("covariance dimension must be at least 1")
        if not self.diag > 0:
            raise DomainError("diagonal entry must be positive")
        # diagonal dominance: PSD for every n
        if self.diag < 2.0 * abs(self.off) * (1.0 - 1e-12):
            raise DomainError("tridiagonal covariance is not diagonally dominant")

    def lag(self, h):
        h = abs(int(h))
        if h == 0:
            return self.diag
        return self.off if h == 1 else 0.0

    def dense(self):
        a = np.diag(np.full(self.n, self.diag))
        if self.n > 1:
            i = np.arange(self.n - 1)
            a[i, i + 1] = self.off
            a[i + 1, i] = self.off
        return a

    def quadratic_form(self, w):
        """``w' A w`` without building the matrix."""
        w = np.asarray(w, dtype=float)
        if w.shape != (self.n,):
            raise DomainError(f"expected a vector of length {self.n}")
        return float(self.diag * np.dot(w, w) + 2.0 * self.off * np.dot(w[:-1], w[1:]))

    def sum_variance(self, length=None):
        """Variance of the sum of ``length`` consecutive entries."""
        m = self.n if length is None else int(length)
        if m <= 0:
            return 0.0
        return m * self.diag + 2.0 * (m - 1) * self.off


def ma1_covariance(params, n):
    if n < 1:
        raise DomainError("n must be at least 1")
    s2 = params.sigma_w ** 2
    return TridiagCovariance(n=int(n), diag=(1.0 + params.b ** 2) * s2, off=-params.b * s2)


def _innovations(params, size, master_seed, replicate, stream, kind):
    bitgen = rng.replicate_stream(master_seed, replicate, stream)
    if kind == "gaussian":
        return rng.normals(bitgen, size, params.mu_w, params.sigma_w)
    if kind == "uniform":
        return rng.centered_uniforms(bitgen, size, params.mu_w, params.sigma_w)
    raise DomainError(f"unknown innovation law {kind!r}")


def sample_ma1(params, n, seed, *, replicate=0, stream=0, innovations="gaussian"):
    """Draw ``X_1..X_n`` from ``n + 1`` innovations ``W_0..W_n``.

    The innovations come from the counter-based stream
    ``(seed, stream, replicate)``, so a series is reproducible from those
    integers alone. ``innovations="uniform"`` swaps in centred uniform
    innovations with the same mean and variance.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    w = _innovations(params, int(n) + 1, seed, replicate, stream, innovations)
    return w[1:] - params.b * w[:-1]


def covariance_tail_sum(cov, m):
    """Sum of ``|Cov(X_1, X_j)|`` over ``j >= max(m, 2)``."""
    if m < 1:
        raise DomainError("m must be at least 1")
    if m <= 2 and cov.n >= 2:
        return abs(cov.off)
    return 0.0


@dataclass
class DiscreteJoint:
    """Finitely supported law on R^d: one row of ``points`` per atom."""

    points: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        self.masses = np.asarray(self.masses, dtype=float).ravel()
        if self.points.shape[0] != self.masses.shape[0]:
            raise DomainError("points and masses disagree on the number of atoms")
        if self.masses.size == 0:
            raise DomainError("a joint law needs at least one atom")
        if self.masses.size > MAX_ATOMS:
            raise CapacityError(f"at most {MAX_ATOMS} atoms are supported")
        if np.any(self.masses < 0) or not np.all(np.isfinite(self.points)):
            raise DomainError("masses must be nonnegative and points finite")
        if abs(self.masses.sum() - 1.0) > 1e-12:
            raise DomainError(f"masses sum to {self.masses.sum()!r}, not 1")

    @property
    def dim(self):
        return self.points.shape[1]

    def transform(self, func):
        """Apply ``func`` elementwise to every coordinate of every atom."""
        return DiscreteJoint(np.vectorize(func, otypes=[float])(self.points), self.masses.copy())

    @classmethod
    def from_csv(cls, path, normalize=False):
        """Read rows ``x1,...,xd,mass``; a non-numeric first row is a header."""
        rows = []
        with open(path, newline="") as fh:
            for lineno, row in enumerate(csv.reader(fh)):
                row = [c.strip() for c in row if c.strip()]
                if not row:
                    continue
                try:
                    rows.append([float(c) for c in row])
                except ValueError:
                    if lineno == 0:
                        continue
                    raise DomainError(f"{path}:{lineno + 1}: non-numeric field")
        if not rows:
            raise DomainError(f"{path}: no atoms")
        if len({len(r) for r in rows}) != 1 or len(rows[0]) < 2:
            raise DomainError(f"{path}: ragged rows")
        data = np.array(rows)
        masses = data[:, -1]
        if normalize:
            masses = masses / masses.sum()
        return cls(data[:, :-1], masses)


@dataclass
class DominatingConstant:
    """Smallest ``M`` found, with the grid point where it is attained."""

    value: float
    witness: tuple
    side: str = "lower"
    infinite: bool = False
    case: dict = field(default_factory=dict)


def _enqd_pair(x1, x2, masses):
    """Best ``(M, u, v, side, infinite)`` for the bivariate law of ``(x1, x2)``."""
    u, iu = np.unique(x1, return_inverse=True)
    v, iv = np.unique(x2, return_inverse=True)
    table = np.zeros((u.size, v.size))
    np.add.at(table, (iu.ravel(), iv.ravel()), masses)
    row, col = table.sum(axis=1), table.sum(axis=0)

    # Only sums of nonnegative masses are formed, so an empty orthant is
    # exactly zero. Lower orthant: P(X1 <= u_i, X2 <= v_j).
    low = table.cumsum(axis=0).cumsum(axis=1)
    low_den = np.outer(row.cumsum(), col.cumsum())
    # Upper orthant: P(X1 > u_i, X2 > v_j).
    tail = table[::-1, ::-1].cumsum(axis=0).cumsum(axis=1)[::-1, ::-1]
    up = np.zeros_like(table)
    up[:-1, :-1] = tail[1:, 1:]
    up_den = np.outer(
        np.append(row[::-1].cumsum()[::-1][1:], 0.0),
        np.append(col[::-1].cumsum()[::-1][1:], 0.0),
    )

    best = (1.0, u[-1], v[-1], "lower", False)
    for side, num, den in (("lower", low, low_den), ("upper", up, up_den)):
        blocked = (den == 0) & (num > 0)
        if np.any(blocked):
            i, j = np.argwhere(blocked)[0]
            return (math.inf, u[i], v[j], side, True)
        ratio = np.divide(num, den, out=np.full_like(num, -np.inf), where=den > 0)
        i, j = np.unravel_index(np.argmax(ratio), ratio.shape)
        if ratio[i, j] > best[0]:
            best = (float(ratio[i, j]), u[i], v[j], side, False)
    return best


def enqd_min_constant(joint):
    """Minimal dominating constant of a bivariate discrete law.

    Both orthant ratios are piecewise constant between atom coordinates, so
    checking every point of the coordinate grid is exhaustive. Cells where
    the product of marginals vanishes together with the joint probability
    are skipped; a positive joint probability over a vanishing product
    would need ``M = inf`` and is flagged.
    """
    if joint.dim != 2:
        raise DomainError(f"enqd_min_constant needs a bivariate law, got d={joint.dim}")
    value, a, b, side, inf = _enqd_pair(joint.points[:, 0], joint.points[:, 1], joint.masses)
    return DominatingConstant(value=value, witness=(float(a), float(b)), side=side, infinite=inf)


def _disjoint_pairs(d):
    for labels in itertools.product((0, 1, 2), repeat=d):
        a = tuple(i for i, lab in enumerate(labels) if lab == 1)
        b = tuple(i for i, lab in enumerate(labels) if lab == 2)
        # ENQD is symmetric in its two arguments
        if a and b and a[0] < b[0]:
            yield a, b


def lenqd_min_constant(joint, max_coeff_grid=3):
    """Largest ENQD constant over linear combinations on disjoint index sets.

    Every unordered pair of disjoint nonempty subsets ``(A, B)`` is paired
    with every coefficient vector on the grid ``{1/g, ..., 1}`` (and with
    its negation). The result is a certified lower bound for the LENQD
    constant of the law; it becomes exact as the grid densifies.
    """
    d = joint.dim
    if not 2 <= d <= MAX_LENQD_DIM:
        raise CapacityError(f"lenqd_min_constant supports 2 <= d <= {MAX_LENQD_DIM}, got {d}")
    g = int(max_coeff_grid)
    if g < 1:
        raise DomainError("max_coeff_grid must be at least 1")
    grid = np.arange(1, g + 1) / g
    pairs = list(_disjoint_pairs(d))
    cases = sum(2 * g ** (len(a) + len(b)) for a, b in pairs)
    if cases * joint.masses.size > MAX_LENQD_WORK:
        raise CapacityError(
            f"{cases} coefficient cases over {joint.masses.size} atoms exceeds the work budget"
        )

    best = DominatingConstant(value=1.0, witness=(math.nan, math.nan))
    first = True
    for a, b in pairs:
        pa, pb = joint.points[:, a], joint.points[:, b]
        for ra in itertools.product(grid, repeat=len(a)):
            # 12 decimals merges atoms whose combinations tie up to rounding
            sa = np.round(pa @ np.array(ra), 12)
            for rb in itertools.product(grid, repeat=len(b)):
                sb = np.round(pb @ np.array(rb), 12)
                for sign in (1.0, -1.0):
                    value, wa, wb, side, inf = _enqd_pair(sign * sa, sign * sb, joint.masses)
                    if first or value > best.value:
                        first = False
                        best = DominatingConstant(
                            value=value,
                            witness=(float(wa), float(wb)),
                            side=side,
                            infinite=inf,
                            case={"A": a, "B": b, "r_A": ra, "r_B": rb, "sign": sign},
                        )
                    if inf:
                        return best
    return best


def _discrete_innovation(params, levels, kind):
    m = int(levels)
    if m < 1:
        raise DomainError("levels must be at least 1")
    if kind == "gaussian":
        nodes, weights = np.polynomial.hermite_e.hermegauss(m)
        weights = weights / weights.sum()
    elif kind == "uniform":
        u = (np.arange(m) + 0.5) / m
        nodes = np.sqrt(3.0) * (2.0 * u - 1.0)
        weights = np.full(m, 1.0 / m)
    else:
        raise DomainError(f"unknown innovation law {kind!r}")
    return params.mu_w + params.sigma_w * nodes, weights


def ma1_discrete_joint(params, n, levels=3, innovations="gaussian"):
    """Exact law of ``(X_1..X_n)`` when each innovation takes ``levels`` values.

    Gaussian innovations are replaced by the ``levels``-point Gauss-Hermite
    rule (which matches moments up to order ``2 * levels - 1``); uniform
    ones by equally weighted cell midpoints.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    nodes, weights = _discrete_innovation(params, levels, innovations)
    if nodes.size ** (n + 1) > MAX_ATOMS:
        raise CapacityError("too many atoms for an exact discretisation")
    idx = np.array(list(itertools.product(range(nodes.size), repeat=n + 1)))
    w = nodes[idx]
    masses = np.prod(weights[idx], axis=1)
    points = w[:, 1:] - params.b * w[:, :-1]
    return DiscreteJoint(points, masses / masses.sum())
