"""Monte Carlo harness for the Kolmogorov distance to the standard normal.

Two statistics are simulated under MA(1) errors:

* the standardised sum ``S_n / V_n`` (``run_clt_experiment``), and
* the standardised wavelet estimate ``(f_n(x) - E f_n(x)) / sd`` at a
  fixed evaluation point (``run_wavelet_experiment``).

In both cases the standardisation uses the exact variance implied by the
tridiagonal covariance. Replicate ``r`` of a run at sample size ``n`` draws
its errors from the counter-based stream ``(master_seed, stream=n,
replicate=r)``; the regression function does not enter the stream, so runs
that differ only in ``f`` see identical errors.
"""
import json
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from ._fitting import loglog_fit
from ._io import write_csv
from ._parallel import replicate_map
from .blocks import block_scheme, exact_variances
from .dependence import DEFAULT_PARAMS, MA1Params, ma1_covariance, sample_ma1
from .exceptions import ConfigError, DomainError
from .special_functions import std_normal_cdf, std_normal_quantile
from .wavelet import (
    REGRESSION_FUNCTIONS,
    build_partition,
    cube_root_level,
    haar_weights,
    weights_variance,
)

__all__ = [
    "SimulationConfig",
    "EmpiricalCdf",
    "BerryEsseenReport",
    "sup_distance_to_normal",
    "qq_points",
    "run_clt_experiment",
    "run_wavelet_experiment",
    "run_table1",
    "rate_fit",
    "rate_experiment",
    "reports_to_csv",
    "qq_to_csv",
    "X_GRID",
]

# evaluation points for the max-over-x mode
X_GRID = np.linspace(0.0, 1.0, 21)


@dataclass(frozen=True)
class SimulationConfig:
    n: int
    reps: int = 1000
    f_id: str = "sine"
    error: MA1Params = DEFAULT_PARAMS
    k_rule: Callable = cube_root_level
    x_eval: float = 0.5
    y_range: tuple = (-3.0, 3.0)
    # resolution of the brute-force grid distance reported next to the exact one
    y_step: float = 1e-3
    master_seed: int = 0
    innovations: str = "gaussian"
    x_mode: str = "single"
    f: Optional[Callable] = None
    parallel: int = 1

    def __post_init__(self):
        if self.n < 2:
            raise ConfigError("n must be at least 2")
        if self.reps < 1:
            raise ConfigError("reps must be at least 1")
        if not self.y_step > 0:
            raise ConfigError("y_step must be positive")
        lo, hi = self.y_range
        if not lo < hi:
            raise ConfigError("y_range must be an increasing pair")
        if self.x_mode not in ("single", "max"):
            raise ConfigError(f"unknown x_mode {self.x_mode!r}")
        if self.innovations not in ("gaussian", "uniform"):
            raise ConfigError(f"unknown innovation law {self.innovations!r}")
        if not 0.0 <= self.x_eval <= 1.0:
            raise ConfigError("x_eval must lie in [0, 1]")
        if self.f is None and self.f_id not in REGRESSION_FUNCTIONS:
            raise ConfigError(f"unknown regression function {self.f_id!r}")

    def regression_function(self):
        return self.f if self.f is not None else REGRESSION_FUNCTIONS[self.f_id]


@dataclass(frozen=True)
class EmpiricalCdf:
    """Right-continuous step function ``#{i : sample_i <= y} / size``."""

    sorted_sample: np.ndarray

    @classmethod
    def from_sample(cls, values):
        values = np.sort(np.asarray(values, dtype=float).ravel())
        if values.size == 0:
            raise DomainError("an empirical CDF needs at least one value")
        return cls(values)

    @property
    def size(self):
        return self.sorted_sample.size

    def __call__(self, y):
        return np.searchsorted(self.sorted_sample, y, side="right") / self.size


def sup_distance_to_normal(cdf, y_range=(-3.0, 3.0)):
    """Exact ``sup_{lo <= y <= hi} |F_hat(y) - Phi(y)|``.

    Between jumps ``F_hat`` is flat and ``Phi`` monotone, so the supremum is
    attained at a range endpoint or at an order statistic, approached from
    the right (value ``i/m``) or from the left (value ``(i-1)/m``).
    """
    if not isinstance(cdf, EmpiricalCdf):
        cdf = EmpiricalCdf.from_sample(cdf)
    lo, hi = y_range
    m = cdf.size
    xs = cdf.sorted_sample
    ends = np.array([lo, hi], dtype=float)
    best = float(np.max(np.abs(cdf(ends) - std_normal_cdf(ends))))
    inside = (xs >= lo) & (xs <= hi)
    if np.any(inside):
        idx = np.nonzero(inside)[0]
        phi = std_normal_cdf(xs[idx])
        best = max(best, float(np.max(np.abs((idx + 1) / m - phi))))
        left = xs[idx] > lo
        if np.any(left):
            best = max(best, float(np.max(np.abs(idx[left] / m - phi[left]))))
    return best


def _grid_distance(cdf, y_range, step):
    lo, hi = y_range
    y = np.linspace(lo, hi, int(round((hi - lo) / step)) + 1)
    return float(np.max(np.abs(cdf(y) - std_normal_cdf(y))))


def qq_points(cdf):
    """``(Phi^{-1}((i - 0.5)/m), x_(i))`` for ``i = 1..m``, as an ``(m, 2)`` array."""
    if not isinstance(cdf, EmpiricalCdf):
        cdf = EmpiricalCdf.from_sample(cdf)
    m = cdf.size
    theo = std_normal_quantile((np.arange(1, m + 1) - 0.5) / m)
    return np.column_stack([np.atleast_1d(theo), cdf.sorted_sample])


@dataclass
class BerryEsseenReport:
    experiment: str
    n: int
    reps: int
    f_id: str
    x_eval: float
    seed: int
    delta: float
    analytic_variance: float
    qq: np.ndarray = field(repr=False)
    k: Optional[int] = None
    innovations: str = "gaussian"
    delta_grid: float = math.nan
    # average estimate and true value at the configured evaluation point
    mean_estimate: float = math.nan
    target: float = math.nan
    per_x: dict = field(default_factory=dict)

    def to_dict(self):
        out = asdict(self)
        out["qq"] = self.qq.tolist()
        out["per_x"] = {str(k): v for k, v in self.per_x.items()}
        return out

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    def csv_row(self):
        x = "" if self.experiment == "clt" else self.x_eval
        f = "" if self.experiment == "clt" else self.f_id
        return (self.n, f, x, self.reps, self.seed, self.delta)


def reports_to_csv(reports, dest=None):
    write_csv(["n", "f", "x", "M", "seed", "error"], (r.csv_row() for r in reports), dest)


def qq_to_csv(report, dest=None):
    write_csv(["theoretical", "empirical"], (tuple(map(float, row)) for row in report.qq), dest)


def _errors(cfg, r):
    return sample_ma1(cfg.error, cfg.n, cfg.master_seed, replicate=r, stream=cfg.n,
                      innovations=cfg.innovations)


def _summarise(cfg, experiment, stats, variance, **extra):
    cdf = EmpiricalCdf.from_sample(stats)
    return BerryEsseenReport(
        experiment=experiment,
        n=cfg.n,
        reps=cfg.reps,
        f_id=cfg.f_id if cfg.f is None else "custom",
        x_eval=cfg.x_eval,
        seed=cfg.master_seed,
        delta=sup_distance_to_normal(cdf, cfg.y_range),
        analytic_variance=variance,
        qq=qq_points(cdf),
        innovations=cfg.innovations,
        delta_grid=_grid_distance(cdf, cfg.y_range, cfg.y_step),
        **extra,
    )


def run_clt_experiment(cfg):
    """Distance of ``S_n / V_n`` to the standard normal over ``cfg.reps`` series."""
    exact = exact_variances(block_scheme(cfg.n), ma1_covariance(cfg.error, cfg.n))
    if not exact.v_n_sq > 0:
        raise ConfigError("Var(S_n) is not positive")
    v_n = math.sqrt(exact.v_n_sq)
    stats = replicate_map(lambda r: _errors(cfg, r).sum() / v_n, cfg.reps, cfg.parallel)
    return _summarise(cfg, "clt", stats, exact.v_n_sq)


def run_wavelet_experiment(cfg):
    """Distance of the standardised Haar estimate to the standard normal.

    ``f_n(x) - E f_n(x)`` equals ``sum_i w_i(x) eps_i`` identically; the
    statistic is formed from that expression so it carries no rounding from
    ``f``. The estimates themselves are still computed from
    ``Y_i = f(x_i) + eps_i`` and summarised in ``mean_estimate``.
    """
    p = build_partition(cfg.n)
    k = int(cfg.k_rule(cfg.n))
    cov = ma1_covariance(cfg.error, cfg.n)
    f = cfg.regression_function()
    fx = np.broadcast_to(np.asarray(f(p.x), dtype=float), p.x.shape)
    xs = [cfg.x_eval] if cfg.x_mode == "single" else [float(x) for x in X_GRID]
    weights = np.array([haar_weights(p, k, x).w for x in xs])
    w_eval = haar_weights(p, k, cfg.x_eval).w
    sds = np.array([math.sqrt(weights_variance(w, cov)) for w in weights])
    if np.any(sds <= 0):
        raise ConfigError("the estimator has zero variance at an evaluation point")

    def one(r):
        eps = _errors(cfg, r)
        centred = np.array([np.dot(w, eps) for w in weights])
        estimate = np.dot(w_eval, fx + eps)
        return np.concatenate([centred / sds, [estimate]])

    draws = replicate_map(one, cfg.reps, cfg.parallel)
    stats, estimates = draws[:, :-1], draws[:, -1]
    per_x = {
        x: sup_distance_to_normal(EmpiricalCdf.from_sample(stats[:, j]), cfg.y_range)
        for j, x in enumerate(xs)
    }
    j = 0 if cfg.x_mode == "single" else int(np.argmax([per_x[x] for x in xs]))
    report = _summarise(
        replace(cfg, x_eval=xs[j]), "wavelet", stats[:, j], float(sds[j] ** 2),
        k=k, mean_estimate=float(estimates.mean()), target=float(f(cfg.x_eval)),
        per_x=per_x if cfg.x_mode == "max" else {},
    )
    return report


def run_table1(ns=(100, 300, 500), reps=1000, seed=0, x_eval=0.5,
               f_ids=("linear", "sine", "exp"), **overrides):
    """One wavelet report per ``(f, n)`` cell, rows ordered by ``f``."""
    return [
        run_wavelet_experiment(
            SimulationConfig(n=n, reps=reps, f_id=f_id, x_eval=x_eval, master_seed=seed, **overrides)
        )
        for f_id in f_ids
        for n in ns
    ]


def rate_fit(points):
    """OLS slope and intercept of ``log delta`` on ``log n``."""
    points = list(points)
    if len(points) < 3:
        raise DomainError("rate_fit needs at least three points")
    ns, deltas = zip(*points)
    return loglog_fit(ns, deltas)


def rate_experiment(ns, reps, seed, experiment="clt", innovations="uniform", **overrides):
    """Reports across ``ns`` and the fitted log-log slope of their distances."""
    runner = {"clt": run_clt_experiment, "wavelet": run_wavelet_experiment}[experiment]
    reports = [
        runner(SimulationConfig(n=n, reps=reps, master_seed=seed, innovations=innovations, **overrides))
        for n in ns
    ]
    slope, _ = rate_fit((r.n, r.delta) for r in reports)
    return reports, slope
