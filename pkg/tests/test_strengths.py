import numpy as np
import pytest

from tsllm.analysis import output_strength_comparison
from tsllm.errors import AllSamplesTooShort
from tsllm.stl import strength_report


def _seasonal(n, rng, noise=0.1):
    t = np.arange(n)
    return 0.05 * t + np.sin(2 * np.pi * t / 6) + noise * rng.normal(size=n)


def test_comparison_summaries(rng):
    samples = [_seasonal(24, rng) for _ in range(5)]
    test = _seasonal(24, rng)
    cmp = output_strength_comparison(samples, test, 6)
    qs = [strength_report(s, 6).seasonal_strength for s in samples]
    assert cmp.avg_seasonal == pytest.approx(np.mean(qs))
    assert cmp.median_seasonal == pytest.approx(np.median(qs))
    assert cmp.test.seasonal_strength == strength_report(test, 6).seasonal_strength
    assert cmp.skipped == []


def test_short_samples_are_skipped(rng):
    with pytest.warns(UserWarning):
        cmp = output_strength_comparison([_seasonal(24, rng), _seasonal(5, rng)], _seasonal(24, rng), 6)
    assert cmp.skipped == [1] and cmp.per_sample[1] is None
    with pytest.raises(AllSamplesTooShort), pytest.warns(UserWarning):
        output_strength_comparison([_seasonal(5, rng)], _seasonal(24, rng), 6)


def test_to_dict(rng):
    d = output_strength_comparison([_seasonal(24, rng)] * 2, _seasonal(24, rng), 6).to_dict()
    assert len(d["per_sample"]) == 2 and "trend_strength" in d["test"]


def test_identical_samples_match_test(rng):
    test = _seasonal(30, rng)
    cmp = output_strength_comparison([test, test.copy()], test, 6)
    assert cmp.avg_trend == cmp.median_trend == cmp.test.trend_strength
    assert cmp.avg_seasonal == cmp.median_seasonal == cmp.test.seasonal_strength


def test_clean_samples_are_more_seasonal_than_noisy_test(rng):
    t = np.arange(30)
    samples = [np.sin(2 * np.pi * t / 6 + ph) for ph in (0.0, 0.1, 0.2)]
    cmp = output_strength_comparison(samples, _seasonal(30, rng, noise=0.6), 6)
    assert cmp.avg_seasonal > cmp.test.seasonal_strength


def test_single_sample(rng):
    s = _seasonal(24, rng)
    cmp = output_strength_comparison([s], _seasonal(24, rng), 6)
    assert cmp.avg_trend == cmp.median_trend and cmp.avg_seasonal == cmp.median_seasonal
