"""Numerical checks of the smoothing, characteristic-function and
Phi-scaling inequalities, plus a Rosenthal moment probe.

Suprema over the real line are taken on uniform grids. The grid value never
exceeds the true supremum, and the gap is at most ``L * step / 2`` for an
``L``-Lipschitz target; that bound is recorded in ``context["grid_error"]``.
"""
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from ._io import write_csv
from ._parallel import replicate_map
from .dependence import ma1_covariance, sample_ma1, MA1Params
from .exceptions import DomainError
from .special_functions import std_normal_cdf

__all__ = [
    "InequalityReport",
    "RosenthalProbe",
    "HOLD_TOL",
    "check_smoothing",
    "check_charfn_bound",
    "check_phi_scale",
    "probe_rosenthal",
    "gaussian_abs_moment",
    "default_grid",
    "reports_to_csv",
]

HOLD_TOL = 1e-12
_SQRT_2PI = math.sqrt(2.0 * math.pi)


@dataclass
class InequalityReport:
    name: str
    lhs: float
    rhs: float
    context: dict = field(default_factory=dict)

    @property
    def slack(self):
        return self.rhs - self.lhs

    @property
    def holds(self):
        return self.slack >= -HOLD_TOL

    def params_text(self):
        return ";".join(f"{k}={v:g}" if isinstance(v, float) else f"{k}={v}"
                        for k, v in self.context.items() if k != "grid_error")


def reports_to_csv(reports, dest=None):
    rows = ((r.name, r.params_text(), r.lhs, r.rhs, r.slack, str(r.holds).lower()) for r in reports)
    write_csv(["name", "params", "lhs", "rhs", "slack", "holds"], rows, dest)


def check_smoothing(delta, a):
    """Smoothing inequality with ``X ~ N(0, 1)`` and the constant ``Y = delta``.

    LHS is ``sup_u |Phi(u - delta) - Phi(u)|``; on the right the first term
    vanishes and ``P(|Y| > a)`` is the indicator of ``delta > a``.
    """
    if not (delta > 0 and a > 0):
        raise DomainError("delta and a must be positive")
    step = 1e-3
    u = np.linspace(-10.0, 10.0, 20001)
    lhs = float(np.max(np.abs(std_normal_cdf(u - delta) - std_normal_cdf(u))))
    rhs = a / _SQRT_2PI + (1.0 if delta > a else 0.0)
    return InequalityReport(
        "smoothing", lhs, rhs,
        {"delta": float(delta), "a": float(a), "grid_error": step / _SQRT_2PI},
    )


def check_charfn_bound(params, n, t):
    """Characteristic-function decoupling bound for Gaussian MA(1) errors.

    Both sides are closed form here: ``|exp(-t^2 V/2) - exp(-t^2 n a/2)|``
    against ``2 t^2 (n - 1) |c|`` with ``a`` the variance, ``c`` the lag-one
    covariance and ``V`` the variance of the sum.
    """
    if n < 1 or n > 64:
        raise DomainError("n must lie in 1..64")
    cov = ma1_covariance(params, n)
    t2 = float(t) ** 2
    lhs = abs(math.exp(-0.5 * t2 * cov.sum_variance()) - math.exp(-0.5 * t2 * n * cov.diag))
    rhs = 2.0 * t2 * (n - 1) * abs(cov.off)
    return InequalityReport("charfn", lhs, rhs, {"b": params.b, "sigma_w": params.sigma_w, "n": int(n), "t": float(t)})


def check_phi_scale(a):
    """``sup_x |Phi(a x) - Phi(x)|`` against ``(|a - 1| + |1/a - 1|) / (e sqrt(2 pi))``."""
    if not a > 0:
        raise DomainError("a must be positive")
    step = 1e-4
    x = np.linspace(-10.0, 10.0, 200001)
    lhs = float(np.max(np.abs(std_normal_cdf(a * x) - std_normal_cdf(x))))
    rhs = (abs(a - 1.0) + abs(1.0 / a - 1.0)) / (math.e * _SQRT_2PI)
    return InequalityReport(
        "phi_scale", lhs, rhs,
        {"a": float(a), "grid_error": (max(a, 1.0) + 1.0) * step / (2 * _SQRT_2PI)},
    )


def gaussian_abs_moment(sd, p):
    """``E|Z|^p`` for ``Z ~ N(0, sd**2)``."""
    return sd ** p * 2.0 ** (p / 2.0) * special.gamma((p + 1.0) / 2.0) / math.sqrt(math.pi)


@dataclass(frozen=True)
class RosenthalProbe:
    empirical_lhs: float
    bracket: float
    ratio: float
    exact_lhs: float
    standard_error: float


def probe_rosenthal(params, n, p, reps, seed, parallel=1):
    """Monte Carlo ``E|S_n|^p`` against the Rosenthal bracket with ``M = 1``.

    The bracket ``sum E|X_i|^p + (sum E X_i^2)^(p/2)`` and the exact
    Gaussian value of ``E|S_n|^p`` are closed form. The ratio is reported;
    the constant in the moment inequality is not known, so nothing is
    asserted here.
    """
    if p not in (2, 3, 4):
        raise DomainError(f"unsupported moment order p={p}")
    if reps < 1000:
        raise DomainError("the Rosenthal probe needs at least 1000 replicates")
    cov = ma1_covariance(params, n)
    draws = replicate_map(
        lambda r: abs(sample_ma1(params, n, seed, replicate=r).sum()) ** p, reps, parallel
    )
    lhs = float(draws.mean())
    bracket = n * gaussian_abs_moment(math.sqrt(cov.diag), p) + (n * cov.diag) ** (p / 2.0)
    return RosenthalProbe(
        empirical_lhs=lhs,
        bracket=float(bracket),
        ratio=float(lhs / bracket),
        exact_lhs=float(gaussian_abs_moment(math.sqrt(cov.sum_variance()), p)),
        standard_error=float(draws.std(ddof=1) / math.sqrt(reps)),
    )


def default_grid():
    """Every report of the documented verification grid."""
    reports = []
    for b in (0.1, 0.3, 0.5, 0.7, 0.9):
        params = MA1Params(b=b, sigma_w=0.7)
        for n in (2, 4, 8, 16, 32, 64):
            for t in (0.1, 0.5, 1.0, 2.0, 5.0):
                reports.append(check_charfn_bound(params, n, t))
    for a in np.logspace(-1.0, 1.0, 60):
        reports.append(check_phi_scale(float(a)))
    steps = np.arange(1, 21) / 20.0
    for delta in steps:
        for a in steps:
            reports.append(check_smoothing(float(delta), float(a)))
    return reports
