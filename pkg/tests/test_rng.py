import numpy as np
import pytest

from cvp.rng import CounterRng


def test_deterministic_across_instances():
    a = CounterRng(42, "train").normals(0, 1000)
    b = CounterRng(42, "train").normals(0, 1000)
    assert np.array_equal(a, b)


def test_order_insensitive_chunking():
    whole = CounterRng(7, "t").uniforms(2, 100)
    parts = np.concatenate(
        [CounterRng(7, "t").uniforms(2, 30), CounterRng(7, "t").uniforms(2, 70, start=30)]
    )
    assert np.array_equal(whole, parts)


def test_row_values_independent_of_count():
    short = CounterRng(1, "x").normals(0, 10)
    long = CounterRng(1, "x").normals(0, 10000)
    assert np.array_equal(short, long[:10])


@pytest.mark.parametrize(
    "a,b",
    [
        ((42, "train", 0), (42, "train", 1)),  # substream
        ((42, "train", 0), (42, "test", 0)),   # stream tag
        ((42, "train", 0), (43, "train", 0)),  # seed
    ],
)
def test_streams_differ(a, b):
    seed_a, tag_a, sub_a = a
    seed_b, tag_b, sub_b = b
    va = CounterRng(seed_a, tag_a).uniforms(sub_a, 100)
    vb = CounterRng(seed_b, tag_b).uniforms(sub_b, 100)
    assert not np.array_equal(va, vb)


def test_uniforms_open_interval():
    u = CounterRng(3, "u").uniforms(0, 200_000)
    assert (u > 0).all() and (u < 1).all()


def test_normal_moments():
    z = CounterRng(5, "z").normals(0, 200_000)
    assert abs(z.mean()) < 0.01
    assert abs(z.std() - 1.0) < 0.01
    assert abs((z < 0).mean() - 0.5) < 0.005


def test_uniform_moments():
    u = CounterRng(6, "u").uniforms(1, 200_000)
    assert abs(u.mean() - 0.5) < 0.005
    assert abs(u.var() - 1 / 12) < 0.002


def test_bernoulli_rate():
    flips = CounterRng(8, "b").bernoulli(0, 100_000, 0.05)
    assert abs(flips.mean() - 0.05) < 0.005


def test_bernoulli_edge_probabilities():
    assert not CounterRng(9, "b").bernoulli(0, 10_000, 0.0).any()
    assert CounterRng(9, "b").bernoulli(0, 10_000, 1.0).all()


def test_adjacent_counters_uncorrelated():
    v = CounterRng(11, "c").normals(0, 100_000)
    corr = np.corrcoef(v[:-1], v[1:])[0, 1]
    assert abs(corr) < 0.01
