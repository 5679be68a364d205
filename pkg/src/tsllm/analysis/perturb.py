"""Sliding-window counterfactual sweep.

For every window start ``S`` the history is min-max normalised, values in
``[S, S + W)`` are jittered multiplicatively by ``x' = x + eta * x`` with
``eta ~ N(mu, sigma^2)`` drawn per index, the series is mapped back to its
original units and re-forecast. The profile records
``delta_mse = MSE_orig - MSE_perturbed`` per start, so a forecaster that
degrades under noise gets negative values; larger ``|delta_mse|`` means
more sensitivity to that stretch of history.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import AnalysisError, TsllmError
from ..forecasters.base import Backend, ForecastRequest, forecast
from ..series import TimeSeries, minmax_normalize, train_test_split
from .metrics import metrics


@dataclass
class PerturbationProfile:
    window_len: int
    starts: list
    delta_mse: list
    noise_mu: float
    noise_sigma: float
    seed: int
    mse_orig: float = float("nan")
    stride: int = 0
    errors: list = field(default_factory=list)

    def most_sensitive_start(self) -> int:
        """Start whose window moves the MSE the most (absolute value)."""
        d = np.abs(np.asarray(self.delta_mse, dtype=float))
        if np.all(np.isnan(d)):
            raise AnalysisError("every window failed")
        return int(self.starts[int(np.nanargmax(d))])

    def to_dict(self) -> dict:
        return {"window_len": self.window_len, "starts": list(self.starts),
                "delta_mse": [None if math.isnan(v) else v for v in self.delta_mse],
                "noise_mu": self.noise_mu, "noise_sigma": self.noise_sigma,
                "seed": self.seed, "mse_orig": self.mse_orig, "stride": self.stride,
                "errors": [list(e) for e in self.errors]}


def perturb_window(train: TimeSeries, start: int, width: int, eta: np.ndarray) -> TimeSeries:
    """Apply ``x' = x + eta * x`` on the min-max scale inside one window.

    Written as ``v + eta * x * range`` so values outside the window, and
    any point with ``eta == 0``, come back bit-for-bit unchanged.
    """
    scaled, params = minmax_normalize(train)
    v = train.values.copy()
    sl = slice(start, start + width)
    v[sl] = v[sl] + eta * scaled.values[sl] * (params.max - params.min)
    return train.with_values(v)


def counterfactual_sweep(ts: TimeSeries, forecaster: Backend, *, horizon: Optional[int] = None,
                         window_fraction: float = 0.1, stride: Optional[int] = None,
                         mu: float = 0.0, sigma: float = 0.2, seed: int = 0,
                         train_fraction: float = 0.8, request_options: Optional[dict] = None,
                         max_workers: int = 1) -> PerturbationProfile:
    """Perturb one window of history at a time and measure the change in MSE.

    The test block is the last ``horizon`` points (or the split at
    ``train_fraction`` when ``horizon`` is None) and is never perturbed.
    Window length is ``floor(window_fraction * len(history))``; starts run
    from 0 to ``len(history) - W`` every ``stride`` points (default W).
    Each window draws its noise from its own child of ``SeedSequence(seed)``.
    A forecaster error in one window is recorded and the sweep goes on.
    """
    if not 0.0 < window_fraction <= 0.5:
        raise AnalysisError("window_fraction must lie in (0, 0.5]")
    if sigma < 0:
        raise AnalysisError("sigma must be >= 0")
    if horizon is None:
        train, test = train_test_split(ts, train_fraction)
    else:
        if not 1 <= horizon < len(ts) - 1:
            raise AnalysisError(f"horizon {horizon} leaves no history")
        train, test = ts.slice(0, len(ts) - horizon), ts.slice(len(ts) - horizon, len(ts))
    n = len(train)
    width = math.floor(window_fraction * n)
    if width < 1:
        raise AnalysisError(f"a {window_fraction} window of {n} points is empty")
    stride = width if stride is None else int(stride)
    if stride < 1:
        raise AnalysisError("stride must be >= 1")
    starts = list(range(0, n - width + 1, stride))
    opts = dict(request_options or {})
    h = len(test)

    def score(series: TimeSeries) -> float:
        res = forecast(ForecastRequest(series, h, **opts), forecaster)
        return metrics(test.values, res.point).mse

    mse_orig = score(train)
    children = np.random.SeedSequence(seed).spawn(len(starts))

    def one(k: int):
        eta = np.random.default_rng(children[k]).normal(mu, sigma, width)
        try:
            return mse_orig - score(perturb_window(train, starts[k], width, eta)), None
        except TsllmError as exc:
            return float("nan"), f"{type(exc).__name__}: {exc}"

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            out = list(pool.map(one, range(len(starts))))
    else:
        out = [one(k) for k in range(len(starts))]
    errors = [(starts[k], msg) for k, (_, msg) in enumerate(out) if msg is not None]
    return PerturbationProfile(width, starts, [float(d) for d, _ in out], float(mu),
                               float(sigma), int(seed), float(mse_orig), stride, errors)
