"""Repeated period-detection queries against a text backend."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..codec import encode_digits, rescale_for_tokens
from ..errors import AnalysisError, NoParsableResponses
from ..forecasters.base import TextBackend
from ..prompts import build_period_prompt, known_periods
from ..series import TimeSeries

_INT = re.compile(r"\d+")


def first_integer(text: str) -> Optional[int]:
    """First run of digits in ``text``, or None."""
    m = _INT.search(text or "")
    return int(m.group()) if m else None


def standard_median(values) -> float:
    """Middle value, or the mean of the two middle values for even counts."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise NoParsableResponses("no values to take a median of")
    return float(np.median(v))


@dataclass
class PeriodExperiment:
    responses: list
    median: float
    real_period: Optional[int] = None
    raw: list = field(default_factory=list)

    @property
    def parsed(self) -> list:
        return [r for r in self.responses if r is not None]

    @property
    def matches(self) -> Optional[bool]:
        return None if self.real_period is None else self.median == self.real_period

    def to_dict(self) -> dict:
        return {"responses": self.responses, "median": self.median,
                "real_period": self.real_period, "raw": self.raw}


def period_experiment(ts: TimeSeries, backend: TextBackend, repeats: int = 10, *,
                      precision: int = 2, temperature: float = 0.7, seed: Optional[int] = None,
                      real_period: Optional[int] = None) -> PeriodExperiment:
    """Ask ``backend`` for the period ``repeats`` times and take the median.

    Responses without an integer are kept as None and ignored by the
    median. ``real_period`` defaults to the series' own period or the
    bundled registry entry for its name.
    """
    if repeats < 1:
        raise AnalysisError("repeats must be >= 1")
    scaled, _ = rescale_for_tokens(ts.values)
    bundle = build_period_prompt(encode_digits(scaled, precision))
    raw = list(backend.complete(bundle, repeats, temperature, seed))
    parsed = [first_integer(t) for t in raw]
    good = [p for p in parsed if p is not None]
    if not good:
        raise NoParsableResponses(f"none of {len(raw)} responses holds an integer")
    if real_period is None:
        real_period = ts.period
    if real_period is None and ts.name:
        real_period = known_periods().get(ts.name.lower())
    return PeriodExperiment(parsed, standard_median(good), real_period, raw)
