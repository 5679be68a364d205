"""Deterministic stand-ins for remote models, for offline runs and tests."""

from __future__ import annotations

import threading
from typing import Callable, Optional, Sequence

import numpy as np

from ..prompts import PromptBundle
from ..series import TimeSeries
from .base import NumericBackend, TextBackend
from .baselines import naive_seasonal


class EchoSeasonal(NumericBackend):
    """Repeat the last cycle of the history."""

    def __init__(self, period: Optional[int] = None):
        self.period = period
        self.id = "echo_seasonal" if period is None else f"echo_seasonal({period})"

    def predict(self, train: TimeSeries, horizon: int) -> np.ndarray:
        return naive_seasonal(train, horizon, self.period).point


class RecencyWeighted(NumericBackend):
    """Exponentially weighted mean of the history, repeated.

    The newest point has weight 1 and a point ``k`` steps older has
    ``0.5 ** (k / half_life)``. ``half_life=0`` gives the last value.
    """

    def __init__(self, half_life: float = 5.0):
        if not half_life >= 0:
            raise ValueError("half_life must be >= 0")
        self.half_life = float(half_life)
        self.id = f"recency_weighted({self.half_life:g})"

    def weights(self, n: int) -> np.ndarray:
        age = np.arange(n - 1, -1, -1, dtype=float)
        if self.half_life == 0:
            return (age == 0).astype(float)
        return 0.5 ** (age / self.half_life)

    def predict(self, train: TimeSeries, horizon: int) -> np.ndarray:
        y = train.values
        w = self.weights(y.size)
        return np.full(int(horizon), float(w @ y / w.sum()))


class Scripted(TextBackend):
    """Return canned completions in order, cycling when more are requested.

    An empty script returns no completions at all. ``calls`` counts the
    prompts seen, which is handy for cache tests.
    """

    def __init__(self, responses: Sequence[str], name: str = "scripted"):
        self.responses = list(responses)
        self.id = name
        self.calls = 0
        self._pos = 0
        self._lock = threading.Lock()

    def complete(self, bundle: PromptBundle, n: int, temperature: float = 0.7,
                 seed: Optional[int] = None) -> list[str]:
        with self._lock:
            self.calls += 1
            if not self.responses:
                return []
            out = []
            for _ in range(n):
                out.append(self.responses[self._pos % len(self.responses)])
                self._pos += 1
            return out


class EchoPeriod(TextBackend):
    """Answer every period prompt with a fixed integer."""

    def __init__(self, period: int):
        self.period = int(period)
        self.id = f"echo_period({self.period})"

    def complete(self, bundle: PromptBundle, n: int, temperature: float = 0.7,
                 seed: Optional[int] = None) -> list[str]:
        return [str(self.period)] * n


class FunctionBackend(TextBackend):
    """Build completions from the prompt with an arbitrary callable."""

    def __init__(self, fn: Callable[[PromptBundle, int], str], name: str = "function"):
        self.fn = fn
        self.id = name

    def complete(self, bundle: PromptBundle, n: int, temperature: float = 0.7,
                 seed: Optional[int] = None) -> list[str]:
        return [self.fn(bundle, i) for i in range(n)]
