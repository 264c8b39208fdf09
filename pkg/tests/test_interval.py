import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from nidf.data import DataMatrix
from nidf.errors import InputError
from nidf.interval import IntervalConfig, build_views, feature_interval, sample_interval


def test_hand_computed_band():
    # row 1: N = {1} U {0} -> values {1, 0}, mean 0.5, population std 0.5
    X = DataMatrix([[0.0], [1.0], [10.0]])
    low, up = sample_interval(X, IntervalConfig(k=1, alpha=3))
    assert low.values[1, 0] == pytest.approx(0.5 - 0.5 / 3, abs=1e-15)
    assert up.values[1, 0] == pytest.approx(0.5 + 0.5 / 3, abs=1e-15)
    # row 2: N = {2, 1} -> mean 5.5, std 4.5
    assert low.values[2, 0] == pytest.approx(5.5 - 1.5)


def test_alpha_sigma_rule():
    X = DataMatrix([[0.0], [1.0], [10.0]])
    low, up = sample_interval(X, IntervalConfig(k=1, alpha=3, scale_rule="alpha_sigma"))
    assert (low.values[1, 0], up.values[1, 0]) == pytest.approx((0.5 - 1.5, 0.5 + 1.5))


def test_self_only_neighborhood_collapses_exactly(rng):
    X = DataMatrix(rng.normal(size=(8, 5)))
    cfg = IntervalConfig(k=0, include_self=True)
    for low, up in (sample_interval(X, cfg), feature_interval(X, cfg)):
        np.testing.assert_array_equal(low.values, X.values)
        np.testing.assert_array_equal(up.values, X.values)


def test_k_zero_requires_self():
    with pytest.raises(InputError):
        IntervalConfig(k=0, include_self=False)


def test_exclude_self():
    X = DataMatrix([[0.0], [1.0], [10.0]])
    low, up = sample_interval(X, IntervalConfig(k=1, include_self=False))
    # row 0's only neighbour is row 1: zero spread around 1.0
    assert low.values[0, 0] == up.values[0, 0] == 1.0


def test_feature_interval_needs_neighbours():
    with pytest.raises(InputError):
        feature_interval(DataMatrix([[1.0], [2.0], [3.0]]), IntervalConfig(k=1))


def test_sample_k_too_large():
    with pytest.raises(InputError):
        sample_interval(DataMatrix(np.zeros((3, 2))), IntervalConfig(k=3))


def test_duplicate_feature_columns_collapse():
    col = np.array([1.0, 4.0, 2.0, 8.0])
    X = DataMatrix(np.column_stack([col, col, col * 10 + 50]))
    low, up = feature_interval(X, IntervalConfig(k=1))
    np.testing.assert_array_equal(low.values[:, :2], X.values[:, :2])
    np.testing.assert_array_equal(up.values[:, :2], X.values[:, :2])


def test_transpose_duality(rng):
    X = DataMatrix(rng.normal(size=(9, 6)))
    cfg = IntervalConfig(k=3, alpha=2.0)
    f_low, f_up = feature_interval(X, cfg)
    s_low, s_up = sample_interval(DataMatrix(X.values.T), cfg)
    np.testing.assert_array_equal(f_low.values, s_low.values.T)
    np.testing.assert_array_equal(f_up.values, s_up.values.T)


def test_build_views_contract(rng):
    X = DataMatrix(rng.normal(size=(20, 6)), labels=rng.integers(0, 3, 20))
    views = build_views(X, IntervalConfig(k=3))
    assert len(views) == 4 and len(list(views)) == 4
    assert views.tags == ("SampleLow", "SampleUp", "FeatureLow", "FeatureUp")
    for v in views:
        assert v.values.shape == X.values.shape
        assert v.feature_ids == X.feature_ids
        np.testing.assert_array_equal(v.labels, X.labels)
    again = build_views(X, IntervalConfig(k=3))
    for a, b in zip(views, again):
        assert a.values.tobytes() == b.values.tobytes()


matrices = arrays(np.float64, st.tuples(st.integers(4, 10), st.integers(4, 8)),
                  elements=st.floats(-100, 100, allow_nan=False))


@settings(max_examples=50, deadline=None)
@given(matrices, st.integers(1, 3), st.floats(0.1, 10))
def test_low_below_up(values, k, alpha):
    views = build_views(DataMatrix(values), IntervalConfig(k=k, alpha=alpha))
    assert np.all(views.sample_low.values <= views.sample_up.values)
    assert np.all(views.feature_low.values <= views.feature_up.values)


@settings(max_examples=30, deadline=None)
@given(matrices, st.floats(0.2, 5), st.floats(1.01, 4))
def test_width_shrinks_with_alpha(values, alpha, factor):
    X = DataMatrix(values)
    wide = build_views(X, IntervalConfig(k=2, alpha=alpha))
    narrow = build_views(X, IntervalConfig(k=2, alpha=alpha * factor))
    for lo_w, up_w, lo_n, up_n in ((wide.sample_low, wide.sample_up, narrow.sample_low, narrow.sample_up),
                                   (wide.feature_low, wide.feature_up, narrow.feature_low, narrow.feature_up)):
        assert np.all(up_n.values - lo_n.values <= up_w.values - lo_w.values + 1e-12)
