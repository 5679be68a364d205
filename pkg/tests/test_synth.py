import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tsllm.errors import BadConfig, BadRange
from tsllm.synth import (SynthConfig, closed_form, generate, grid, multi_period_sweep,
                         sample_sweep, single_period_sweep)


def test_pure_cosine():
    ts = generate(SynthConfig(0.0, ((1.0, 1.0),), noise_sd=0.0))
    assert len(ts) == 200 and ts.period == 10
    assert ts.values.max() == pytest.approx(1.0) and ts.values.min() == pytest.approx(-1.0, abs=1e-3)
    assert ts.values[0] == 1.0


def test_linear_ramp():
    ts = generate(SynthConfig(0.5, (), noise_sd=0.0))
    assert ts.values[0] == 0.0 and ts.values[-1] == pytest.approx(10.0, abs=1e-12)
    assert np.allclose(np.diff(ts.values), 10.0 / 199)
    assert ts.period is None


def test_grid_includes_endpoints():
    x = grid(SynthConfig(1.0))
    assert x[0] == 0.0 and x[-1] == 20.0


@pytest.mark.parametrize("kwargs", [dict(x_min=1, x_max=1), dict(n_points=1),
                                    dict(betas=((1.0, 0.0),)), dict(betas=((np.inf, 1.0),)),
                                    dict(noise_sd=-1.0)])
def test_bad_configs(kwargs):
    with pytest.raises(BadConfig):
        SynthConfig(1.0, **kwargs)


@settings(max_examples=50, deadline=None)
@given(st.floats(-3, 3), st.floats(-5, 5), st.floats(0.1, 3), st.integers(0, 2**32))
def test_noiseless_matches_closed_form(alpha, amp, freq, seed):
    cfg = SynthConfig(alpha, ((amp, freq),), noise_sd=0.0, seed=seed)
    x = np.linspace(0, 20, 200)
    expected = alpha * x + amp * np.cos(2 * np.pi * freq * x)
    assert np.max(np.abs(generate(cfg).values - expected)) <= 1e-12 * max(1.0, np.abs(expected).max())


def test_seed_determinism():
    cfg = SynthConfig(0.3, ((2.0, 1.0),), seed=77)
    assert np.array_equal(generate(cfg).values, generate(cfg).values)
    other = SynthConfig(0.3, ((2.0, 1.0),), seed=78)
    assert not np.array_equal(generate(cfg).values, generate(other).values)


def test_noise_scale():
    ok = 0
    for seed in range(100):
        cfg = SynthConfig(0.4, ((3.0, 1.0),), seed=seed)
        sd = np.std(generate(cfg).values - closed_form(cfg), ddof=1)
        ok += 0.8 <= sd <= 1.2
    assert ok >= 95


def test_sweep_ranges_and_reproducibility():
    a = single_period_sweep(seed=0)
    b = single_period_sweep(seed=0)
    assert a == b and len(a) == 10
    for c in a:
        assert 0.2 <= c.alpha <= 0.7
        (amp, f), = c.betas
        assert 2.0 <= amp < 4.0 and f == 1.0
    assert len({c.seed for c in a}) == 10


def test_multi_period_sweep():
    for c in multi_period_sweep(seed=1):
        (b1, f1), (b2, f2) = c.betas
        assert b1 == 2.0 and f1 == 1.0 and f2 == 3.0 and 1.0 <= b2 < 3.0
        assert generate(c).period == 10


def test_degenerate_range():
    (c,) = sample_sweep((0.25, 0.25), [(3.0, 3.0)], 1, seed=9)
    assert c.alpha == 0.25 and c.betas == ((3.0, 1.0),)


def test_bad_ranges():
    with pytest.raises(BadRange):
        sample_sweep((1.0, 0.0), [], 3)
    with pytest.raises(BadRange):
        sample_sweep((0.0, 1.0), [(1.0, 2.0)], 0)
    with pytest.raises(BadRange):
        sample_sweep((0.0, 1.0), [(1.0, 2.0)], 2, frequencies=())


def test_config_dict_roundtrip():
    c = SynthConfig(0.3, ((2.0, 1.0), (1.5, 3.0)), seed=5)
    assert SynthConfig.from_dict(c.to_dict()) == c

