"""Error metrics, Pearson correlation and correlation matrices."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from ..errors import AnalysisError, LengthMismatch, MapeUndefined, ZeroVariance

MAPE_EPSILON = 1e-8


@dataclass(frozen=True)
class MetricSet:
    mse: float
    mae: float
    mape: Optional[float]
    r2: Optional[float]
    n: int
    mape_excluded: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {"mse": self.mse, "mae": self.mae, "mape": self.mape, "r2": self.r2,
                "n": self.n, "mape_excluded": list(self.mape_excluded)}


def _pair(actual, predicted) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(getattr(actual, "values", actual), dtype=float).ravel()
    p = np.asarray(getattr(predicted, "values", predicted), dtype=float).ravel()
    if a.size != p.size:
        raise LengthMismatch(f"actual has {a.size} values, predicted {p.size}")
    if a.size == 0:
        raise LengthMismatch("metrics need at least one value")
    return a, p


def metrics(actual, predicted, *, mape_epsilon: float = MAPE_EPSILON,
            strict: bool = False) -> MetricSet:
    """MSE, MAE, MAPE (percent) and R².

    Points with ``|actual| <= mape_epsilon`` are left out of MAPE and their
    indices listed on the result; ``strict=True`` raises MapeUndefined
    instead, as does a series where every point is excluded. R² is None
    when the actuals are constant.
    """
    a, p = _pair(actual, predicted)
    err = a - p
    mse = float(np.mean(err ** 2))
    mae = float(np.mean(np.abs(err)))
    small = np.flatnonzero(np.abs(a) <= mape_epsilon)
    if small.size and (strict or small.size == a.size):
        raise MapeUndefined(small)
    keep = np.abs(a) > mape_epsilon
    mape = float(100.0 * np.mean(np.abs(err[keep]) / np.abs(a[keep])))
    sst = float(np.sum((a - a.mean()) ** 2))
    r2 = None if sst == 0.0 else float(1.0 - np.sum(err ** 2) / sst)
    return MetricSet(mse, mae, mape, r2, int(a.size), tuple(int(i) for i in small))


def pearson(x, y) -> float:
    """Pearson correlation; raises ZeroVariance if either input is constant."""
    a, b = _pair(x, y)
    if a.size < 2:
        raise LengthMismatch("pearson needs at least two points")
    da, db = a - a.mean(), b - b.mean()
    sa, sb = np.sqrt(np.dot(da, da)), np.sqrt(np.dot(db, db))
    if sa == 0.0 or sb == 0.0:
        raise ZeroVariance("pearson is undefined for a constant input")
    r = float(np.dot(da, db) / (sa * sb))
    return max(-1.0, min(1.0, r))


@dataclass(frozen=True)
class CorrelationMatrix:
    labels: tuple[str, ...]
    matrix: np.ndarray = field(repr=False)

    def get(self, a: str, b: str) -> float:
        return float(self.matrix[self.labels.index(a), self.labels.index(b)])

    def to_dict(self) -> dict:
        return {"labels": list(self.labels), "matrix": self.matrix.tolist()}


def correlation_matrix(records: Sequence[Mapping[str, float]],
                       columns: Optional[Sequence[str]] = None) -> CorrelationMatrix:
    """Pairwise Pearson correlations between named columns of ``records``.

    ``columns`` defaults to the keys of the first record, in order. The
    diagonal is exactly 1.
    """
    if len(records) < 3:
        raise AnalysisError("a correlation matrix needs at least 3 records")
    labels = tuple(columns if columns is not None else records[0].keys())
    data = np.array([[float(r[c]) for c in labels] for r in records])
    k = len(labels)
    m = np.eye(k)
    for i in range(k):
        for j in range(i + 1, k):
            m[i, j] = m[j, i] = pearson(data[:, i], data[:, j])
    return CorrelationMatrix(labels, m)


def strength_metric_row(q_t: float, q_s: float, per_model: Mapping[str, MetricSet]) -> dict:
    """Flatten one dataset's strengths and model scores into a record."""
    row = {}
    for model, ms in per_model.items():
        row[f"{model}-MAPE"] = ms.mape
        row[f"{model}-R2"] = ms.r2
    row["Q_T"] = q_t
    row["Q_S"] = q_s
    return row
