"""Series container, validation, normalization and splitting."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import BadPeriod, ConstantSeries, DegenerateSplit, NonFiniteValue, TooShort


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Ordered finite observations with optional timestamps and period.

    Construct through :func:`validate_series` (or directly, which runs the
    same checks). ``values`` is stored as a read-only float array.
    """

    values: np.ndarray
    timestamps: Optional[np.ndarray] = None
    period: Optional[int] = None
    name: Optional[str] = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).ravel()
        if values.size < 2:
            raise TooShort(f"series needs at least 2 values, got {values.size}")
        bad = np.flatnonzero(~np.isfinite(values))
        if bad.size:
            raise NonFiniteValue(int(bad[0]))
        object.__setattr__(self, "values", _frozen(values))

        if self.timestamps is not None:
            ts = np.asarray(self.timestamps)
            if ts.shape != values.shape:
                raise ValueError("timestamps must have the same length as values")
            if not np.all(ts[1:] > ts[:-1]):
                raise ValueError("timestamps must be strictly increasing")
            ts = ts.copy()
            ts.setflags(write=False)
            object.__setattr__(self, "timestamps", ts)

        if self.period is not None:
            p = self.period
            if isinstance(p, float) and p.is_integer():
                p = int(p)
            if not isinstance(p, (int, np.integer)) or isinstance(p, bool):
                raise BadPeriod(f"period must be an integer, got {p!r}")
            p = int(p)
            if not 2 <= p <= values.size // 2:
                raise BadPeriod(f"period {p} outside [2, {values.size // 2}]")
            object.__setattr__(self, "period", p)

    def __len__(self) -> int:
        return self.values.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        same_ts = (self.timestamps is None and other.timestamps is None) or (
            self.timestamps is not None
            and other.timestamps is not None
            and np.array_equal(self.timestamps, other.timestamps)
        )
        return (
            np.array_equal(self.values, other.values)
            and same_ts
            and self.period == other.period
            and self.name == other.name
        )

    __hash__ = None

    def with_values(self, values, keep_period: bool = True) -> "TimeSeries":
        """Same metadata, new values of the same length."""
        period = self.period if keep_period else None
        return TimeSeries(values, self.timestamps, period, self.name)

    def slice(self, start: int, stop: Optional[int] = None) -> "TimeSeries":
        start, stop, _ = slice(start, stop).indices(len(self))
        return _part(self, start, stop)


def validate_series(raw: Sequence[float], period: Optional[int] = None, *,
                    timestamps=None, name: Optional[str] = None) -> TimeSeries:
    """Check ``raw`` and wrap it as a :class:`TimeSeries`.

    Raises NonFiniteValue, TooShort or BadPeriod.
    """
    if raw is None or len(raw) == 0:
        raise TooShort("series is empty")
    return TimeSeries(raw, timestamps, period, name)


@dataclass(frozen=True)
class ScaleParams:
    """Record of how a series was rescaled so it can be inverted.

    ``mode`` is ``"minmax"`` (uses ``min``/``max``) or ``"percentile"``
    (uses ``divisor``).
    """

    mode: str
    min: Optional[float] = None
    max: Optional[float] = None
    divisor: Optional[float] = None
    percentile: Optional[float] = None
    target: Optional[float] = None

    def __post_init__(self):
        if self.mode == "minmax":
            if self.min is None or self.max is None or not self.max > self.min:
                raise ValueError("minmax scale needs max > min")
        elif self.mode == "percentile":
            if self.divisor is None or not self.divisor > 0:
                raise ValueError("percentile scale needs a positive divisor")
        else:
            raise ValueError(f"unknown scale mode {self.mode!r}")

    def apply(self, values) -> np.ndarray:
        v = np.asarray(values, dtype=float)
        if self.mode == "minmax":
            return (v - self.min) / (self.max - self.min)
        return v / self.divisor

    def invert(self, values) -> np.ndarray:
        v = np.asarray(values, dtype=float)
        if self.mode == "minmax":
            return v * (self.max - self.min) + self.min
        return v * self.divisor

    def to_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


def minmax_normalize(ts: TimeSeries) -> tuple[TimeSeries, ScaleParams]:
    lo, hi = float(ts.values.min()), float(ts.values.max())
    if not hi > lo:
        raise ConstantSeries("cannot min-max normalize a constant series")
    params = ScaleParams("minmax", min=lo, max=hi)
    scaled = params.apply(ts.values)
    # pin the extremes so they map to exactly 0 and 1
    scaled[ts.values == lo] = 0.0
    scaled[ts.values == hi] = 1.0
    return ts.with_values(scaled), params


def denormalize(ts: TimeSeries, params: ScaleParams) -> TimeSeries:
    return ts.with_values(params.invert(ts.values))


SPLIT_CONVENTIONS = ("count", "index")


def split_index(n: int, train_fraction: float, convention: str = "count") -> int:
    """Number of training points for a series of length ``n``.

    ``"count"`` takes ``floor(fraction * n)`` points. ``"index"`` splits
    before the observation sitting at ``fraction`` of the index range,
    i.e. ``floor(fraction * (n - 1))`` points; this is how darts'
    ``split_before`` behaves.
    """
    if convention == "count":
        k = math.floor(train_fraction * n)
    elif convention == "index":
        k = math.floor(train_fraction * (n - 1))
    else:
        raise ValueError(f"unknown split convention {convention!r}")
    return k


def train_test_split(ts: TimeSeries, train_fraction: float = 0.8,
                     convention: str = "count") -> tuple[TimeSeries, TimeSeries]:
    if not 0.0 < train_fraction < 1.0:
        raise DegenerateSplit(f"train_fraction must be in (0, 1), got {train_fraction}")
    n = len(ts)
    k = split_index(n, train_fraction, convention)
    if k < 1 or n - k < 1:
        raise DegenerateSplit(f"split of {n} points at {train_fraction} leaves an empty side")
    # TimeSeries requires >= 2 points; a 1-point side is carried as-is
    return _part(ts, 0, k), _part(ts, k, n)


def _part(ts: TimeSeries, start: int, stop: int) -> TimeSeries:
    values = ts.values[start:stop]
    stamps = None if ts.timestamps is None else ts.timestamps[start:stop]
    period = ts.period
    if period is not None and period > len(values) // 2:
        period = None
    if len(values) >= 2:
        return TimeSeries(values, stamps, period, ts.name)
    return _single(values, stamps, ts.name)


def _single(values, stamps, name) -> TimeSeries:
    # a one-point segment bypasses the length check; it is only ever used
    # as a test block to score against
    obj = object.__new__(TimeSeries)
    object.__setattr__(obj, "values", _frozen(values))
    object.__setattr__(obj, "timestamps", stamps)
    object.__setattr__(obj, "period", None)
    object.__setattr__(obj, "name", name)
    return obj
