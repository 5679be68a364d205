"""Classical baseline forecasters.

All of these are pure functions of the training series: no randomness and
no state, so repeated calls return identical results.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from ..errors import BadParams, MissingPeriod, WindowTooLarge
from ..series import TimeSeries
from .base import ForecastResult, NumericBackend


def _values(train) -> np.ndarray:
    v = train.values if isinstance(train, TimeSeries) else np.asarray(train, dtype=float)
    if v.ndim != 1 or v.size < 1:
        raise BadParams("train must be a non-empty 1-d series")
    return v


def _check_horizon(horizon: int) -> int:
    if int(horizon) != horizon or horizon < 1:
        raise BadParams("horizon must be a positive integer")
    return int(horizon)


def _result(point: np.ndarray, name: str, **settings) -> ForecastResult:
    point = np.asarray(point, dtype=float)
    return ForecastResult(point.copy(), [point.copy()], name, settings=settings)


def naive_mean(train, horizon: int) -> ForecastResult:
    h = _check_horizon(horizon)
    y = _values(train)
    return _result(np.full(h, y.mean()), "naive_mean")


def naive_seasonal(train, horizon: int, period: Optional[int] = None) -> ForecastResult:
    """Repeat the last full cycle. ``period`` falls back to ``train.period``."""
    h = _check_horizon(horizon)
    y = _values(train)
    if period is None and isinstance(train, TimeSeries):
        period = train.period
    if period is None:
        raise MissingPeriod("naive_seasonal needs a period")
    period = int(period)
    if period < 1 or period > y.size:
        raise MissingPeriod(f"period {period} does not fit a train of length {y.size}")
    cycle = y[-period:]
    return _result(np.resize(cycle, h), "naive_seasonal", period=period)


def naive_drift(train, horizon: int) -> ForecastResult:
    """Extend the line through the first and last training points."""
    h = _check_horizon(horizon)
    y = _values(train)
    slope = 0.0 if y.size < 2 else (y[-1] - y[0]) / (y.size - 1)
    return _result(y[-1] + slope * np.arange(1, h + 1), "naive_drift")


def moving_average(train, horizon: int, window: int = 3) -> ForecastResult:
    h = _check_horizon(horizon)
    y = _values(train)
    if int(window) != window or window < 1:
        raise BadParams("window must be a positive integer")
    if window > y.size:
        raise WindowTooLarge(f"window {window} exceeds train length {y.size}")
    return _result(np.full(h, y[-int(window):].mean()), "moving_average", window=int(window))


# -- Holt-Winters --------------------------------------------------------------

@dataclass(frozen=True)
class HoltWintersFit:
    alpha: float
    beta: Optional[float]
    gamma: Optional[float]
    level: float
    slope: float
    season: np.ndarray = field(repr=False)
    sse: float = 0.0


def _init_state(y: np.ndarray, trend: bool, period: Optional[int]):
    """Initial level, slope and seasonal indices, plus the first step to update."""
    if period is None:
        slope = float(y[1] - y[0]) if trend else 0.0
        return float(y[0]), slope, np.zeros(0), 1
    p = period
    c1, c2 = y[:p].mean(), y[p:2 * p].mean()
    slope = float((c2 - c1) / p) if trend else 0.0
    season = y[:p] - (c1 + slope * (np.arange(p) - (p - 1) / 2.0))
    level = float(c1 + slope * (p - 1) / 2.0)
    return level, slope, season.astype(float), p


def _run(y, alpha, beta, gamma, trend, period, state=None):
    level, slope, season, start = state if state is not None else _init_state(y, trend, period)
    season = season.copy()
    sse = 0.0
    for t in range(start, y.size):
        s_old = season[t % period] if period else 0.0
        yhat = level + slope + s_old
        sse += (y[t] - yhat) ** 2
        prev = level
        level = alpha * (y[t] - s_old) + (1.0 - alpha) * (level + slope)
        if trend:
            slope = beta * (level - prev) + (1.0 - beta) * slope
        if period:
            season[t % period] = gamma * (y[t] - level) + (1.0 - gamma) * s_old
    return level, slope, season, sse


def _check_unit(name: str, v: Optional[float], lo_open: bool = True):
    if v is None:
        return
    ok = (0.0 < v <= 1.0) if lo_open else (0.0 <= v <= 1.0)
    if not ok or not np.isfinite(v):
        raise BadParams(f"{name} must lie in {'(0, 1]' if lo_open else '[0, 1]'}, got {v}")


def fit_holt_winters(train, trend: bool = False, seasonal: Optional[int] = None,
                     alpha: Optional[float] = None, beta: Optional[float] = None,
                     gamma: Optional[float] = None) -> HoltWintersFit:
    """Additive Holt-Winters. Any smoothing parameter left as None is chosen
    by minimising the one-step-ahead squared error on ``train``."""
    y = _values(train)
    _check_unit("alpha", alpha)
    _check_unit("beta", beta, lo_open=False)
    _check_unit("gamma", gamma, lo_open=False)
    if seasonal is not None:
        seasonal = int(seasonal)
        if seasonal < 2:
            raise BadParams("seasonal period must be >= 2")
        if y.size < 2 * seasonal:
            raise BadParams(f"seasonal model needs two cycles ({2 * seasonal} points), got {y.size}")
    elif trend and y.size < 2:
        raise BadParams("a trend model needs at least two points")

    names = ["alpha"] + (["beta"] if trend else []) + (["gamma"] if seasonal else [])
    given = {"alpha": alpha, "beta": beta, "gamma": gamma}
    free = [k for k in names if given[k] is None]
    state = _init_state(y, trend, seasonal)

    def unpack(theta):
        vals = dict(given)
        vals.update(zip(free, theta))
        return vals

    if free:
        def objective(theta):
            v = unpack(theta)
            return _run(y, v["alpha"], v["beta"], v["gamma"], trend, seasonal, state)[3]

        bounds = [(1e-4, 1.0) if k == "alpha" else (0.0, 1.0) for k in free]
        best = None
        for x0 in ((0.5, 0.1, 0.1), (0.2, 0.05, 0.3), (0.9, 0.01, 0.05)):
            res = minimize(objective, np.array(x0[:len(free)]), method="L-BFGS-B", bounds=bounds)
            if best is None or res.fun < best.fun:
                best = res
        params = unpack(best.x)
    else:
        params = dict(given)
    level, slope, season, sse = _run(y, params["alpha"], params["beta"], params["gamma"],
                                     trend, seasonal, state)
    return HoltWintersFit(float(params["alpha"]),
                          None if not trend else float(params["beta"]),
                          None if not seasonal else float(params["gamma"]),
                          level, slope, season, float(sse))


def exponential_smoothing(train, horizon: int, alpha: Optional[float] = None,
                          seasonal: Optional[int] = None, trend: bool = False,
                          beta: Optional[float] = None, gamma: Optional[float] = None
                          ) -> ForecastResult:
    """Additive exponential smoothing forecast.

    Level only by default; ``trend`` adds Holt's slope and ``seasonal`` an
    additive seasonal index of that period. With ``alpha=1`` and neither
    term the forecast is the last observation.
    """
    h = _check_horizon(horizon)
    y = _values(train)
    fit = fit_holt_winters(y, trend, seasonal, alpha, beta, gamma)
    steps = np.arange(1, h + 1)
    point = fit.level + fit.slope * steps
    if seasonal:
        # index of y[n + k - 1] in the rolling seasonal buffer
        point = point + fit.season[(y.size + steps - 1) % seasonal]
    return _result(point, "exponential_smoothing", alpha=fit.alpha, beta=fit.beta,
                   gamma=fit.gamma, trend=trend, seasonal=seasonal)


# -- backend adapters ------------------------------------------------------------

_BASELINES = {
    "naive_mean": naive_mean,
    "naive_seasonal": naive_seasonal,
    "naive_drift": naive_drift,
    "moving_average": moving_average,
    "exponential_smoothing": exponential_smoothing,
}
BASELINE_IDS = tuple(_BASELINES)


class BaselineBackend(NumericBackend):
    """Wrap one of the baseline functions as a backend; ``params`` are
    passed through as keyword arguments."""

    def __init__(self, name: str, **params):
        if name not in _BASELINES:
            raise KeyError(f"unknown baseline {name!r}")
        self.name = name
        self.params = params
        self.id = name

    def predict(self, train: TimeSeries, horizon: int) -> np.ndarray:
        return _BASELINES[self.name](train, horizon, **self.params).point
