"""Additive seasonal-trend decomposition by LOESS, and strength measures.

The procedure follows Cleveland et al. (1990): an inner loop that
alternates cycle-subseries smoothing, low-pass filtering of the seasonal
estimate, and trend smoothing of the deseasonalized series. Robustness
(outer) iterations are available but off by default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import BadPeriod, SeriesTooShortForPeriod, ZeroVariance
from .loess import bisquare, loess_fit
from .series import TimeSeries

PERIODIC = "periodic"


def _next_odd(v: float) -> int:
    k = int(math.ceil(v - 1e-12))
    return k if k % 2 == 1 else k + 1


@dataclass(frozen=True)
class STLConfig:
    """STL knobs.

    ``seasonal`` is ``"periodic"`` or an odd window length >= 3. In periodic
    mode each cycle-subseries is replaced by one global weighted polynomial
    of degree ``seasonal_deg``: degree 0 is the plain per-phase mean, degree
    1 (the default) lets the seasonal amplitude drift linearly across
    cycles. With degree 0 the seasonal is exactly periodic and each full
    cycle sums to (numerically) zero; with degree 1 cycle sums stay small
    but are not zero.
    ``trend`` and ``low_pass`` default to the classical recommendations
    derived from the period.
    """

    seasonal: Union[str, int] = PERIODIC
    trend: Optional[int] = None
    low_pass: Optional[int] = None
    seasonal_deg: int = 1
    trend_deg: int = 1
    low_pass_deg: int = 1
    inner_iter: int = 2
    outer_iter: int = 0

    def __post_init__(self):
        if self.seasonal != PERIODIC:
            s = self.seasonal
            if not isinstance(s, (int, np.integer)) or s < 3 or s % 2 == 0:
                raise ValueError("seasonal window must be 'periodic' or an odd integer >= 3")
        for name in ("trend", "low_pass"):
            v = getattr(self, name)
            if v is not None and (v < 3 or v % 2 == 0):
                raise ValueError(f"{name} window must be an odd integer >= 3")
        if self.inner_iter < 1 or self.outer_iter < 0:
            raise ValueError("need inner_iter >= 1 and outer_iter >= 0")

    def trend_window(self, period: int) -> int:
        if self.trend is not None:
            return self.trend
        if self.seasonal == PERIODIC:
            return _next_odd(1.5 * period)
        return _next_odd(1.5 * period / (1.0 - 1.5 / self.seasonal))

    def low_pass_window(self, period: int) -> int:
        if self.low_pass is not None:
            return self.low_pass
        return _next_odd(period)

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True, eq=False)
class Decomposition:
    trend: np.ndarray
    seasonal: np.ndarray
    residual: np.ndarray
    period: int

    def __post_init__(self):
        n = len(self.trend)
        if len(self.seasonal) != n or len(self.residual) != n:
            raise ValueError("components must have equal length")
        for name in ("trend", "seasonal", "residual"):
            a = np.array(getattr(self, name), dtype=float)
            a.setflags(write=False)
            object.__setattr__(self, name, a)

    @property
    def observed(self) -> np.ndarray:
        return self.trend + self.seasonal + self.residual


def _moving_average(x: np.ndarray, w: int) -> np.ndarray:
    c = np.cumsum(np.concatenate(([0.0], x)))
    return (c[w:] - c[:-w]) / w


def _global_poly(x, y, w, degree, x_eval):
    """Weighted least-squares polynomial over the whole subseries."""
    if degree <= 0 or w.sum() <= 0:
        level = np.dot(w, y) / w.sum() if w.sum() > 0 else y.mean()
        return np.full(x_eval.size, level)
    mx = np.dot(w, x) / w.sum()
    sqw = np.sqrt(w)
    design = np.vander(x - mx, degree + 1, increasing=True) * sqw[:, None]
    coef = np.linalg.lstsq(design, y * sqw, rcond=None)[0]
    return np.vander(x_eval - mx, degree + 1, increasing=True) @ coef


def _cycle_subseries(y: np.ndarray, period: int, cfg: STLConfig,
                     rw: np.ndarray) -> np.ndarray:
    """Smooth each cycle-subseries; returns length ``n + 2 * period``.

    The output is indexed from ``-period`` to ``n + period - 1``: each
    subseries is extended one cycle backward and forward.
    """
    n = y.size
    out = np.empty(n + 2 * period)
    for j in range(period):
        sub = y[j::period]
        m = sub.size
        pos = np.arange(m, dtype=float)
        if cfg.seasonal == PERIODIC:
            fitted = _global_poly(pos, sub, rw[j::period], min(cfg.seasonal_deg, m - 1),
                                  np.arange(-1, m + 1, dtype=float))
        else:
            fitted = loess_fit(pos, sub, cfg.seasonal, cfg.seasonal_deg,
                               x_eval=np.arange(-1, m + 1, dtype=float),
                               weights=rw[j::period])
        # subseries j occupies positions j, j+p, ...; in the extended array
        # index i corresponds to time i - period
        out[j::period][: m + 2] = fitted
    return out


def _low_pass(c: np.ndarray, period: int, cfg: STLConfig) -> np.ndarray:
    x = _moving_average(c, period)
    x = _moving_average(x, period)
    x = _moving_average(x, 3)
    n = x.size
    t = np.arange(n, dtype=float)
    return loess_fit(t, x, cfg.low_pass_window(period), cfg.low_pass_deg)


def stl_decompose(ts: Union[TimeSeries, np.ndarray], period: Optional[int] = None,
                  config: Optional[STLConfig] = None) -> Decomposition:
    """Split a series into trend, seasonal and residual components.

    ``period`` falls back to ``ts.period``. The residual is defined as the
    remainder, so the three components add back to the input.
    """
    cfg = config or STLConfig()
    if isinstance(ts, TimeSeries):
        y = ts.values
        period = period if period is not None else ts.period
    else:
        y = np.asarray(ts, dtype=float)
    if period is None:
        raise BadPeriod("a period is required for STL")
    period = int(period)
    n = y.size
    if period < 2:
        raise BadPeriod(f"period must be >= 2, got {period}")
    if n < 2 * period:
        raise SeriesTooShortForPeriod(f"{n} points cannot hold two cycles of {period}")

    t = np.arange(n, dtype=float)
    nt = cfg.trend_window(period)
    rw = np.ones(n)
    trend = np.zeros(n)
    seasonal = np.zeros(n)
    for outer in range(cfg.outer_iter + 1):
        for _ in range(cfg.inner_iter):
            c = _cycle_subseries(y - trend, period, cfg, rw)
            low = _low_pass(c, period, cfg)
            seasonal = c[period: period + n] - low
            trend = loess_fit(t, y - seasonal, nt, cfg.trend_deg, weights=rw)
        if outer < cfg.outer_iter:
            r = np.abs(y - trend - seasonal)
            h = 6.0 * np.median(r)
            rw = bisquare(r / h) if h > 0 else np.ones(n)
    residual = y - trend - seasonal
    return Decomposition(trend, seasonal, residual, period)


@dataclass(frozen=True)
class StrengthReport:
    trend_strength: float
    seasonal_strength: float
    period_used: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _strength(component: np.ndarray, residual: np.ndarray) -> float:
    denom = np.var(component + residual)
    if not denom > 0.0:
        raise ZeroVariance("component plus residual has zero variance")
    q = 1.0 - np.var(residual) / denom
    return float(min(1.0, max(0.0, q)))


def trend_strength(dec: Decomposition) -> float:
    """``max(0, 1 - Var(R) / Var(T + R))`` with population variances."""
    return _strength(dec.trend, dec.residual)


def seasonal_strength(dec: Decomposition) -> float:
    """``max(0, 1 - Var(R) / Var(S + R))`` with population variances."""
    return _strength(dec.seasonal, dec.residual)


def strength_report(ts: Union[TimeSeries, np.ndarray], period: Optional[int] = None,
                    config: Optional[STLConfig] = None) -> StrengthReport:
    dec = stl_decompose(ts, period, config)
    return StrengthReport(trend_strength(dec), seasonal_strength(dec), dec.period)
