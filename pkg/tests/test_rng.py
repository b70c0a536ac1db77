import numpy as np
from hypothesis import given, settings, strategies as st
from scipy import stats

from lenqd.rng import centered_uniforms, normals, replicate_stream, uniforms


def test_stream_is_pure_function_of_indices():
    a = uniforms(replicate_stream(3, 7, 100), 50)
    b = uniforms(replicate_stream(3, 7, 100), 50)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, uniforms(replicate_stream(3, 8, 100), 50))
    assert not np.array_equal(a, uniforms(replicate_stream(3, 7, 101), 50))
    assert not np.array_equal(a, uniforms(replicate_stream(4, 7, 100), 50))


def test_prefix_consistency():
    long = uniforms(replicate_stream(0, 1, 2), 1000)
    short = uniforms(replicate_stream(0, 1, 2), 10)
    assert np.array_equal(long[:10], short)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**63), st.integers(0, 10**6))
def test_uniforms_open_interval(seed, rep):
    u = uniforms(replicate_stream(seed, rep), 256)
    assert np.all((u > 0) & (u < 1))


def test_distributions():
    z = normals(replicate_stream(11), 20000)
    assert stats.kstest(z, "norm").pvalue > 1e-3
    u = centered_uniforms(replicate_stream(12), 20000, loc=1.0, scale=2.0)
    assert abs(u.mean() - 1.0) < 0.1 and abs(u.std() - 2.0) < 0.05
    assert np.all(np.abs(u - 1.0) <= 2.0 * np.sqrt(3.0))
