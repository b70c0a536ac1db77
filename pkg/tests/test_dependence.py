import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lenqd.dependence import (
    DEFAULT_PARAMS,
    DiscreteJoint,
    MA1Params,
    TridiagCovariance,
    covariance_tail_sum,
    enqd_min_constant,
    lenqd_min_constant,
    ma1_covariance,
    ma1_discrete_joint,
    sample_ma1,
)
from lenqd.exceptions import CapacityError, DomainError

# a trivariate law on which a non-strict step map raises the combination constant
STEP_COUNTEREXAMPLE = DiscreteJoint(
    [[-1, 0, 0], [-1, 0, -1], [-1, 0, 2], [1, 1, 1], [2, -1, 0], [0, 0, 2]],
    [0.2604509748685905, 0.23324510106866322, 0.012867211922455522,
     0.3348895372601188, 0.09452784276783766, 0.06401933211233433],
)


def brute_orthant_constant(points, masses):
    """Direct double loop over the coordinate grid."""
    best = 1.0
    x, y = points[:, 0], points[:, 1]
    for u in np.unique(x):
        for v in np.unique(y):
            lo = masses[(x <= u) & (y <= v)].sum()
            lo_den = masses[x <= u].sum() * masses[y <= v].sum()
            hi = masses[(x > u) & (y > v)].sum()
            hi_den = masses[x > u].sum() * masses[y > v].sum()
            for num, den in ((lo, lo_den), (hi, hi_den)):
                if den > 0:
                    best = max(best, num / den)
                elif num > 0:
                    return np.inf
    return best


def random_joint(rng, atoms, d, support=4):
    points = rng.integers(-support, support + 1, size=(atoms, d)).astype(float)
    masses = rng.dirichlet(np.ones(atoms))
    return DiscreteJoint(points, masses / masses.sum())


def test_covariance_of_default_params():
    cov = ma1_covariance(DEFAULT_PARAMS, 5)
    assert cov.diag == pytest.approx(0.8869)
    assert cov.off == pytest.approx(-0.441)
    assert cov.lag(2) == 0.0
    dense = cov.dense()
    assert np.allclose(dense, dense.T) and np.all(np.linalg.eigvalsh(dense) > 0)


@settings(max_examples=50)
@given(st.integers(1, 60), st.lists(st.floats(-5, 5), min_size=60, max_size=60))
def test_quadratic_form_matches_dense(n, w):
    cov = ma1_covariance(DEFAULT_PARAMS, n)
    w = np.array(w[:n])
    assert cov.quadratic_form(w) == pytest.approx(w @ cov.dense() @ w, rel=1e-12, abs=1e-12)
    assert cov.sum_variance() == pytest.approx(np.ones(n) @ cov.dense() @ np.ones(n), abs=1e-12)


def test_non_dominant_covariance_rejected():
    with pytest.raises(DomainError):
        TridiagCovariance(3, 1.0, -0.6)
    with pytest.raises(DomainError):
        MA1Params(sigma_w=0.0)


def test_tail_sum():
    cov = ma1_covariance(DEFAULT_PARAMS, 10)
    assert covariance_tail_sum(cov, 1) == pytest.approx(0.441)
    assert covariance_tail_sum(cov, 3) == 0.0


def test_sample_reproducible_and_moments():
    a = sample_ma1(DEFAULT_PARAMS, 100, 5, replicate=3)
    assert np.array_equal(a, sample_ma1(DEFAULT_PARAMS, 100, 5, replicate=3))
    assert not np.array_equal(a, sample_ma1(DEFAULT_PARAMS, 100, 5, replicate=4))
    x = sample_ma1(DEFAULT_PARAMS, 200000, 1, innovations="uniform")
    assert x.var() == pytest.approx(0.8869, rel=0.02)
    assert np.mean(x[1:] * x[:-1]) == pytest.approx(-0.441, abs=0.01)


def test_named_enqd_values():
    indep = DiscreteJoint([[0, 0], [0, 1], [1, 0], [1, 1]], [0.25] * 4)
    assert enqd_min_constant(indep).value == pytest.approx(1.0)
    como = DiscreteJoint([[0, 0], [1, 1]], [0.5, 0.5])
    assert enqd_min_constant(como).value == pytest.approx(2.0)
    anti = DiscreteJoint([[0, 1], [1, 0]], [0.5, 0.5])
    assert enqd_min_constant(anti).value == pytest.approx(1.0)


def test_enqd_never_infinite_on_valid_laws():
    # a vanishing marginal product forces the joint orthant to vanish too
    joint = random_joint(np.random.default_rng(9), 12, 2)
    assert not enqd_min_constant(joint).infinite


def test_discrete_ma1_pair_is_nqd():
    joint = ma1_discrete_joint(DEFAULT_PARAMS, 2, levels=5)
    assert enqd_min_constant(joint).value == pytest.approx(1.0, abs=1e-12)
    gh = ma1_discrete_joint(DEFAULT_PARAMS, 2, levels=3)
    cov = np.cov(gh.points.T, aweights=gh.masses, bias=True)
    assert cov[0, 1] == pytest.approx(-0.441, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 12))
def test_enqd_matches_brute_force(seed, atoms):
    joint = random_joint(np.random.default_rng(seed), atoms, 2)
    assert enqd_min_constant(joint).value == pytest.approx(brute_orthant_constant(joint.points, joint.masses), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 10))
def test_enqd_closure_under_nondecreasing_maps(seed, atoms):
    rng = np.random.default_rng(seed)
    joint = random_joint(rng, atoms, 2)
    cut = rng.integers(-3, 4)
    maps = [lambda v: float(v > cut), np.cbrt, lambda v: np.floor(v / 2.0), lambda v: np.exp(v) + 3.0]
    f = maps[rng.integers(len(maps))]
    assert enqd_min_constant(joint.transform(f)).value <= enqd_min_constant(joint).value + 1e-12


@pytest.mark.parametrize("trial", range(10))
def test_lenqd_invariant_under_increasing_affine_maps(trial):
    joint = random_joint(np.random.default_rng(100 + trial), 6, 3, support=2)
    base = lenqd_min_constant(joint, 2).value
    assert lenqd_min_constant(joint.transform(lambda v: 2.0 * v + 1.0), 2).value == pytest.approx(base, rel=1e-9)


@pytest.mark.parametrize("trial, f", [(0, np.exp), (3, np.cbrt)])
def test_lenqd_nonlinear_gap_closes_on_finer_grid(trial, f):
    # on the coarse grid the transformed law looks worse; refining the
    # grid for the original law recovers the same constant
    joint = random_joint(np.random.default_rng(100 + trial), 6, 3, support=2)
    moved = lenqd_min_constant(joint.transform(f), 2).value
    assert moved > lenqd_min_constant(joint, 2).value
    assert moved <= lenqd_min_constant(joint, 6).value + 1e-9


def test_lenqd_step_map_counterexample():
    # non-strict monotone maps can raise the combination constant for d = 3
    before = lenqd_min_constant(STEP_COUNTEREXAMPLE, 8).value
    after = lenqd_min_constant(STEP_COUNTEREXAMPLE.transform(lambda v: float(v > 0)), 2).value
    assert before == pytest.approx(2.506838219900095, rel=1e-12)
    assert after == pytest.approx(2.986059248615074, rel=1e-12)


def test_lenqd_reduces_to_enqd_for_pairs():
    joint = random_joint(np.random.default_rng(3), 8, 2)
    assert lenqd_min_constant(joint, 1).value == pytest.approx(enqd_min_constant(joint).value)


def test_lenqd_capacity():
    joint = random_joint(np.random.default_rng(0), 5, 7)
    with pytest.raises(CapacityError):
        lenqd_min_constant(joint)
    big = DiscreteJoint(np.zeros((9000, 6)), np.full(9000, 1 / 9000))
    with pytest.raises(CapacityError):
        lenqd_min_constant(big, 3)


def test_joint_validation():
    with pytest.raises(DomainError):
        DiscreteJoint([[0, 0]], [0.9])
    with pytest.raises(DomainError):
        DiscreteJoint([[0, 0], [1, 1]], [1.2, -0.2])
    with pytest.raises(CapacityError):
        DiscreteJoint(np.zeros((10001, 2)), np.full(10001, 1 / 10001))


def test_from_csv(tmp_path):
    path = tmp_path / "joint.csv"
    path.write_text("x1,x2,mass\n0,0,1\n1,1,1\n")
    with pytest.raises(DomainError):
        DiscreteJoint.from_csv(path)
    joint = DiscreteJoint.from_csv(path, normalize=True)
    assert joint.dim == 2 and np.allclose(joint.masses, 0.5)
    bad = tmp_path / "bad.csv"
    bad.write_text("0,0,0.5\n1,x,0.5\n")
    with pytest.raises(DomainError):
        DiscreteJoint.from_csv(bad)
