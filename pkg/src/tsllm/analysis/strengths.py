"""Compare the strength of forecast samples with that of the test block."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..errors import AllSamplesTooShort, SeriesError
from ..series import TimeSeries
from ..stl import STLConfig, StrengthReport, strength_report


@dataclass
class StrengthComparison:
    per_sample: list
    test: StrengthReport
    avg_trend: float
    avg_seasonal: float
    median_trend: float
    median_seasonal: float
    skipped: list

    def to_dict(self) -> dict:
        return {"per_sample": [None if s is None else s.to_dict() for s in self.per_sample],
                "test": self.test.to_dict(), "avg_trend": self.avg_trend,
                "avg_seasonal": self.avg_seasonal, "median_trend": self.median_trend,
                "median_seasonal": self.median_seasonal, "skipped": self.skipped}


def output_strength_comparison(samples: Sequence, test, period: int,
                               config: Optional[STLConfig] = None) -> StrengthComparison:
    """Strengths of every forecast sample, their mean and median, and the test's.

    Samples shorter than two cycles (or otherwise undecomposable) are
    skipped with a warning; AllSamplesTooShort if none remain.
    """
    test_values = test.values if isinstance(test, TimeSeries) else np.asarray(test, dtype=float)
    test_rep = strength_report(test_values, period, config)
    reports, skipped = [], []
    for i, s in enumerate(samples):
        s = np.asarray(s, dtype=float)
        try:
            reports.append(strength_report(s, period, config))
        except SeriesError as exc:
            reports.append(None)
            skipped.append(i)
            warnings.warn(f"sample {i} skipped: {exc}", stacklevel=2)
    good = [r for r in reports if r is not None]
    if not good:
        raise AllSamplesTooShort(f"no sample of {len(reports)} could be decomposed at period {period}")
    qt = np.array([r.trend_strength for r in good])
    qs = np.array([r.seasonal_strength for r in good])
    return StrengthComparison(reports, test_rep, float(qt.mean()), float(qs.mean()),
                              float(np.median(qt)), float(np.median(qs)), skipped)
