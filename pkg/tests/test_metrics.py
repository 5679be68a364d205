import numpy as np
import pytest
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from tsllm.analysis import correlation_matrix, metrics, pearson, strength_metric_row
from tsllm.errors import AnalysisError, LengthMismatch, MapeUndefined, ZeroVariance

finite = st.floats(-1e4, 1e4, allow_nan=False)


def test_metric_example():
    m = metrics([100, 200], [110, 180])
    assert m.mse == 250 and m.mae == 15 and m.mape == pytest.approx(10.0)
    assert m.r2 == pytest.approx(1 - 500 / 5000)


def test_perfect_forecast():
    m = metrics([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    assert m.mse == 0 and m.mae == 0 and m.mape == 0 and m.r2 == 1


def test_r2_undefined_for_constant_actuals():
    assert metrics([5.0, 5.0], [4.0, 6.0]).r2 is None


def test_mape_zero_handling():
    m = metrics([0.0, 10.0], [1.0, 11.0])
    assert m.mape == pytest.approx(10.0) and m.mape_excluded == (0,)
    with pytest.raises(MapeUndefined):
        metrics([0.0, 10.0], [1.0, 11.0], strict=True)
    with pytest.raises(MapeUndefined):
        metrics([0.0, 0.0], [1.0, 1.0])


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        metrics([1.0, 2.0], [1.0])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=30))
def test_metric_properties(pairs):
    a, p = map(np.array, zip(*pairs))
    m = metrics(a, p, mape_epsilon=1e-3) if np.any(np.abs(a) > 1e-3) else None
    if m is None:
        return
    assert m.mse >= 0 and m.mae >= 0 and m.mape >= 0
    assert m.mae ** 2 <= m.mse * (1 + 1e-9) + 1e-9
    if m.r2 is not None:
        assert m.r2 <= 1 + 1e-12


def test_pearson_examples():
    assert pearson([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)
    assert pearson([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)
    with pytest.raises(ZeroVariance):
        pearson([1, 1, 1], [1, 2, 3])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(finite, finite), min_size=3, max_size=30))
def test_pearson_matches_oracle(pairs):
    x, y = map(list, zip(*pairs))
    if np.ptp(x) < 1e-3 or np.ptp(y) < 1e-3:
        return
    r = pearson(x, y)
    assert -1 <= r <= 1
    assert r == pytest.approx(oracles.pearson(x, y), abs=1e-9)
    assert r == pytest.approx(scipy.stats.pearsonr(x, y)[0], abs=1e-9)
    assert r == pytest.approx(pearson(y, x), abs=1e-15)


def test_correlation_matrix(rng):
    records = [{"a": float(a), "b": float(b), "c": float(c)} for a, b, c in rng.normal(size=(12, 3))]
    cm = correlation_matrix(records)
    assert cm.labels == ("a", "b", "c")
    assert np.array_equal(cm.matrix, cm.matrix.T)
    assert np.all(np.diag(cm.matrix) == 1.0)
    assert cm.get("a", "c") == pytest.approx(pearson([r["a"] for r in records], [r["c"] for r in records]))
    assert correlation_matrix(records, ["c", "a"]).labels == ("c", "a")
    with pytest.raises(AnalysisError):
        correlation_matrix(records[:2])


def test_strength_metric_row():
    row = strength_metric_row(0.9, 0.5, {"m": metrics([1.0, 2.0, 4.0], [1.0, 2.0, 3.0])})
    assert row["Q_T"] == 0.9 and row["Q_S"] == 0.5 and set(row) == {"m-MAPE", "m-R2", "Q_T", "Q_S"}


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(1, 1e3), min_size=2, max_size=30))
def test_self_metrics(a):
    if np.ptp(a) == 0:
        return
    m = metrics(a, a)
    assert (m.mse, m.mae, m.mape, m.r2) == (0.0, 0.0, 0.0, 1.0)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-100, 100), min_size=3, max_size=30),
       st.floats(0.1, 10) | st.floats(-10, -0.1), st.floats(-100, 100))
def test_pearson_affine(x, a, b):
    if np.ptp(x) < 1e-2:
        return
    assert abs(pearson(x, [a * v + b for v in x]) - np.sign(a)) <= 1e-12


@settings(max_examples=50, deadline=None)
@given(st.integers(3, 15), st.integers(2, 5), st.integers(0, 2**31))
def test_matrix_entries_bounded(n, k, seed):
    data = np.random.default_rng(seed).normal(size=(n, k))
    cm = correlation_matrix([{f"c{j}": float(v) for j, v in enumerate(row)} for row in data])
    assert np.all(np.abs(cm.matrix) <= 1.0) and np.array_equal(cm.matrix, cm.matrix.T)
