"""Period estimation from the raw periodogram."""

from __future__ import annotations

from typing import Mapping, Optional

import numpy as np

from .errors import SeriesTooShort
from .series import TimeSeries

TIE_TOLERANCE = 0.01


def _detrend(y: np.ndarray, how: str) -> np.ndarray:
    if how == "constant":
        return y - y.mean()
    if how == "linear":
        t = np.arange(y.size, dtype=float)
        slope, intercept = np.polyfit(t, y, 1)
        return y - (slope * t + intercept)
    if how == "none":
        return y
    raise ValueError(f"unknown detrend mode {how!r}")


def estimate_period_periodogram(ts, detrend: str = "linear") -> list[tuple[int, float]]:
    """Rank candidate periods by spectral power.

    Each non-DC Fourier bin ``k`` maps to the period ``round(N / k)``;
    bins that round to the same period keep the largest power, and only
    periods in ``[2, N // 2]`` are reported. The list is sorted by power,
    except that the longest period whose power is within 1% of the
    maximum is moved to the front so a fundamental beats its harmonics.

    The series is linearly detrended first by default, which keeps a
    strong trend from leaking into the lowest bins.
    """
    y = ts.values if isinstance(ts, TimeSeries) else np.asarray(ts, dtype=float)
    n = y.size
    if n < 8:
        raise SeriesTooShort(f"periodogram needs at least 8 points, got {n}")
    spec = np.abs(np.fft.rfft(_detrend(y, detrend))) ** 2
    best: dict[int, float] = {}
    for k in range(1, spec.size):
        p = int(round(n / k))
        if 2 <= p <= n // 2:
            if spec[k] > best.get(p, -1.0):
                best[p] = float(spec[k])
    ranked = sorted(best.items(), key=lambda kv: (-kv[1], -kv[0]))
    if not ranked:
        return ranked
    top = ranked[0][1]
    near = [kv for kv in ranked if kv[1] >= (1.0 - TIE_TOLERANCE) * top]
    lead = max(near, key=lambda kv: kv[0])
    ranked.remove(lead)
    return [lead] + ranked


def resolve_period(ts: TimeSeries, explicit: Optional[int] = None,
                   registry: Optional[Mapping[str, int]] = None) -> int:
    """Pick the period for strength computations.

    Order: explicit argument, the series' own period, a registry entry for
    the series name, the top periodogram candidate.
    """
    if explicit is not None:
        return int(explicit)
    if ts.period is not None:
        return ts.period
    if registry is not None and ts.name is not None:
        key = ts.name.lower()
        if key in registry:
            return int(registry[key])
    return estimate_period_periodogram(ts)[0][0]
