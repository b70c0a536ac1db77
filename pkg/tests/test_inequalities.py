import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, stats

from lenqd.dependence import DEFAULT_PARAMS, MA1Params, ma1_covariance
from lenqd.exceptions import DomainError
from lenqd.inequalities import (
    check_charfn_bound,
    check_phi_scale,
    check_smoothing,
    default_grid,
    gaussian_abs_moment,
    probe_rosenthal,
    reports_to_csv,
)


def test_documented_examples():
    r = check_charfn_bound(DEFAULT_PARAMS, 2, 1.0)
    assert r.lhs == pytest.approx(0.22832, abs=1e-5)
    assert r.rhs == pytest.approx(0.882)
    assert check_charfn_bound(DEFAULT_PARAMS, 5, 0.0).lhs == 0.0
    assert check_charfn_bound(MA1Params(b=0.0), 5, 1.0).rhs == 0.0
    r = check_phi_scale(2.0)
    assert r.lhs == pytest.approx(0.16134, abs=1e-5)
    assert r.rhs == pytest.approx(0.22014, abs=1e-5)
    r = check_smoothing(0.1, 0.1)
    assert r.lhs == pytest.approx(0.03988, abs=1e-5) and r.rhs == pytest.approx(0.03989, abs=1e-5)
    assert r.holds and r.slack < 1e-4
    assert check_smoothing(0.1, 0.05).rhs > 1.0
    assert check_phi_scale(0.5).lhs == pytest.approx(check_phi_scale(2.0).lhs, abs=1e-4)
    assert check_phi_scale(1.0).lhs == 0.0


def test_smoothing_lhs_closed_form():
    # sup_u |Phi(u - d) - Phi(u)| is attained at u = d / 2
    for d in (0.05, 0.5, 1.0):
        exact = 2 * stats.norm.cdf(d / 2) - 1
        r = check_smoothing(d, 1.0)
        assert exact - r.context["grid_error"] <= r.lhs <= exact + 1e-15


def test_phi_scale_lhs_against_optimiser():
    for a in (0.2, 0.9, 3.0):
        res = -min(
            (-abs(stats.norm.cdf(a * x) - stats.norm.cdf(x)), x) for x in np.linspace(0, 5, 50001)
        )[0]
        assert check_phi_scale(a).lhs == pytest.approx(res, abs=1e-8)


@settings(max_examples=100, deadline=None)
@given(st.floats(-0.99, 0.99), st.integers(1, 64), st.floats(-10, 10))
def test_charfn_bound_holds_everywhere(b, n, t):
    assert check_charfn_bound(MA1Params(b=b), n, t).holds


def test_default_grid_all_hold(tmp_path):
    reports = default_grid()
    assert len(reports) == 150 + 60 + 400
    assert all(r.holds for r in reports)
    path = tmp_path / "grid.csv"
    reports_to_csv(reports, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "name,params,lhs,rhs,slack,holds" and len(lines) == 611


def test_gaussian_abs_moment_quadrature():
    for p in (1, 2, 3, 4):
        val = integrate.quad(lambda z: abs(z) ** p * stats.norm.pdf(z, scale=1.3), -np.inf, np.inf)[0]
        assert gaussian_abs_moment(1.3, p) == pytest.approx(val, rel=1e-9)


def test_rosenthal_probe_exact_second_moment():
    probe = probe_rosenthal(DEFAULT_PARAMS, 50, 2, 2000, seed=3)
    v2 = ma1_covariance(DEFAULT_PARAMS, 50).sum_variance()
    assert probe.exact_lhs == pytest.approx(v2)
    assert abs(probe.empirical_lhs - v2) < 4 * probe.standard_error


def test_rosenthal_probe_fourth_moment():
    probe = probe_rosenthal(MA1Params(b=0.0), 100, 4, 4000, seed=0)
    assert abs(probe.empirical_lhs - probe.exact_lhs) < 4 * probe.standard_error
    assert probe.ratio < 10


def test_rosenthal_ratio_depends_on_dependence_strength():
    # strong negative correlation shrinks E|S_n|^p far below the bracket
    strong = probe_rosenthal(DEFAULT_PARAMS, 1000, 3, 1000, seed=0).ratio
    iid = probe_rosenthal(MA1Params(b=0.0), 1000, 3, 1000, seed=0).ratio
    assert strong < 0.01 < 1 < iid < 10


def test_domains():
    with pytest.raises(DomainError):
        check_smoothing(0.0, 1.0)
    with pytest.raises(DomainError):
        check_phi_scale(-1.0)
    with pytest.raises(DomainError):
        check_charfn_bound(DEFAULT_PARAMS, 65, 1.0)
    with pytest.raises(DomainError):
        probe_rosenthal(DEFAULT_PARAMS, 10, 5, 1000, 0)
