"""Synthetic trend-plus-cosine series and parameter sweeps.

Series are ``y = alpha * x + sum_k beta_k * cos(2 pi f_k x) + eps`` on an
evenly spaced grid that includes both endpoints. Noise comes from numpy's
``default_rng`` (PCG64 bit generator, ziggurat normal sampler), seeded per
config, so a config always regenerates the same series.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import BadConfig, BadRange
from .series import TimeSeries


@dataclass(frozen=True)
class SynthConfig:
    alpha: float
    betas: tuple[tuple[float, float], ...] = ()
    x_min: float = 0.0
    x_max: float = 20.0
    n_points: int = 200
    noise_sd: float = 1.0
    seed: int = 0

    def __post_init__(self):
        betas = tuple((float(a), float(f)) for a, f in self.betas)
        object.__setattr__(self, "betas", betas)
        if not self.x_max > self.x_min:
            raise BadConfig("x_max must exceed x_min")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise BadConfig("n_points must be an integer >= 2")
        if not (math.isfinite(self.alpha) and self.noise_sd >= 0 and math.isfinite(self.noise_sd)):
            raise BadConfig("alpha must be finite and noise_sd a finite value >= 0")
        for amp, freq in betas:
            if not math.isfinite(amp):
                raise BadConfig("amplitudes must be finite")
            if not (freq > 0 and math.isfinite(freq)):
                raise BadConfig("frequencies must be positive")
        if not 0 <= self.seed < 2**64:
            raise BadConfig("seed must fit in 64 bits")

    @property
    def samples_per_cycle(self) -> Optional[int]:
        """Samples per cycle of the lowest frequency, rounded."""
        if not self.betas:
            return None
        f = min(freq for _, freq in self.betas)
        return int(round(self.n_points / (self.x_max - self.x_min) / f))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["betas"] = [list(b) for b in self.betas]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SynthConfig":
        d = dict(d)
        d["betas"] = tuple(tuple(b) for b in d.get("betas", ()))
        return cls(**d)


def grid(config: SynthConfig) -> np.ndarray:
    return np.linspace(config.x_min, config.x_max, config.n_points)


def closed_form(config: SynthConfig, x: Optional[np.ndarray] = None) -> np.ndarray:
    """Noise-free part of the series."""
    x = grid(config) if x is None else x
    y = config.alpha * x
    for amp, freq in config.betas:
        y = y + amp * np.cos(2.0 * np.pi * freq * x)
    return y


def generate(config: SynthConfig, name: Optional[str] = None) -> TimeSeries:
    x = grid(config)
    y = closed_form(config, x)
    if config.noise_sd > 0:
        rng = np.random.default_rng(config.seed)
        y = y + config.noise_sd * rng.standard_normal(config.n_points)
    period = config.samples_per_cycle
    if period is not None and not 2 <= period <= config.n_points // 2:
        period = None
    return TimeSeries(y, timestamps=x, period=period, name=name)


def _check_range(r, what: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in r)
    except (TypeError, ValueError):
        raise BadRange(f"{what} must be a (low, high) pair") from None
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        raise BadRange(f"{what} range [{lo}, {hi}] is empty")
    return lo, hi


def sample_sweep(alpha_range: Sequence[float], beta_ranges: Sequence[Sequence[float]],
                 count: int, seed: int = 0, frequencies: Sequence[float] = (1.0,),
                 x_min: float = 0.0, x_max: float = 20.0, n_points: int = 200,
                 noise_sd: float = 1.0) -> list[SynthConfig]:
    """Draw ``count`` configs with coefficients uniform over the ranges.

    ``beta_ranges[k]`` pairs with ``frequencies[k]``. A degenerate range
    ``(a, a)`` always yields exactly ``a``. Each config gets its own noise
    seed spawned from ``seed``.
    """
    if count < 1:
        raise BadRange("count must be >= 1")
    a_lo, a_hi = _check_range(alpha_range, "alpha")
    b_ranges = [_check_range(r, f"beta[{k}]") for k, r in enumerate(beta_ranges)]
    if len(b_ranges) != len(frequencies):
        raise BadRange("need one frequency per beta range")

    ss = np.random.SeedSequence(seed)
    param_ss, noise_ss = ss.spawn(2)
    rng = np.random.default_rng(param_ss)
    noise_seeds = [int(c.generate_state(1, np.uint64)[0]) for c in noise_ss.spawn(count)]
    configs = []
    for i in range(count):
        alpha = a_lo if a_lo == a_hi else float(rng.uniform(a_lo, a_hi))
        betas = []
        for (lo, hi), f in zip(b_ranges, frequencies):
            amp = lo if lo == hi else float(rng.uniform(lo, hi))
            betas.append((amp, float(f)))
        configs.append(SynthConfig(alpha, tuple(betas), x_min, x_max, n_points,
                                   noise_sd, noise_seeds[i]))
    return configs


def single_period_sweep(seed: int = 0, count: int = 10) -> list[SynthConfig]:
    """alpha in [0.2, 0.7], beta in [2, 4), f = 1, N(0, 1) noise."""
    return sample_sweep((0.2, 0.7), [(2.0, 4.0)], count, seed, frequencies=(1.0,))


def multi_period_sweep(seed: int = 0, count: int = 10) -> list[SynthConfig]:
    """alpha in [0.2, 0.7], beta1 = 2, beta2 in [1, 3), f1 = 1, f2 = 3."""
    return sample_sweep((0.2, 0.7), [(2.0, 2.0), (1.0, 3.0)], count, seed,
                        frequencies=(1.0, 3.0))
