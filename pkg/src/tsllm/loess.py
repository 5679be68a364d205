"""Locally weighted polynomial regression (LOESS).

The smoother used by STL. ``loess_fit`` works with an integer neighbourhood
size and arbitrary evaluation points, which STL needs to extrapolate each
cycle-subseries by one step at both ends. ``loess_smooth`` is the
span-fraction front end.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import LengthMismatch, SpanTooSmall


def tricube(u: np.ndarray) -> np.ndarray:
    u = np.clip(np.abs(u), 0.0, 1.0)
    return (1.0 - u**3) ** 3


def bisquare(u: np.ndarray) -> np.ndarray:
    u = np.clip(np.abs(u), 0.0, 1.0)
    return (1.0 - u**2) ** 2


def _local_fit(dx: np.ndarray, y: np.ndarray, w: np.ndarray, degree: int) -> float:
    """Weighted polynomial fit in coordinates centred on the target point.

    Returns the intercept, i.e. the fitted value at ``dx == 0``. Falls back
    to a lower degree when the weighted design is rank deficient.
    """
    sw = w.sum()
    if sw <= 0.0:
        return float(np.mean(y))
    if degree == 0:
        return float(np.dot(w, y) / sw)
    if degree == 1:
        mx = np.dot(w, dx) / sw
        my = np.dot(w, y) / sw
        cx = dx - mx
        sxx = np.dot(w, cx * cx)
        if sxx <= 1e-12 * sw * max(1.0, float(np.max(np.abs(dx))) ** 2):
            return float(my)
        slope = np.dot(w, cx * (y - my)) / sxx
        return float(my - slope * mx)
    sqw = np.sqrt(w)
    design = np.vander(dx, degree + 1, increasing=True) * sqw[:, None]
    coef, _, rank, _ = np.linalg.lstsq(design, y * sqw, rcond=None)
    if rank < degree + 1:
        return _local_fit(dx, y, w, degree - 1)
    return float(coef[0])


def loess_fit(x, y, q: int, degree: int = 1, x_eval=None, weights=None) -> np.ndarray:
    """Fit LOESS with a neighbourhood of ``q`` points and evaluate it.

    Parameters
    ----------
    x, y : array_like
        Abscissae (strictly increasing) and observations.
    q : int
        Neighbourhood size. When ``q`` exceeds ``len(x)`` the bandwidth is
        stretched by ``q / len(x)`` as in Cleveland's original smoother.
    degree : int
        Local polynomial degree, 0, 1 or 2.
    x_eval : array_like, optional
        Points at which to evaluate; defaults to ``x``.
    weights : array_like, optional
        Extra per-observation weights (robustness weights).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    x_eval = x if x_eval is None else np.asarray(x_eval, dtype=float)
    rw = np.ones(n) if weights is None else np.asarray(weights, dtype=float)
    q = int(q)
    if q < 1:
        raise SpanTooSmall("neighbourhood must contain at least one point")

    out = np.empty(x_eval.size)
    k = min(q, n)
    for j, x0 in enumerate(x_eval):
        dist = np.abs(x - x0)
        if k < n:
            idx = np.argpartition(dist, k - 1)[:k]
        else:
            idx = np.arange(n)
        h = dist[idx].max()
        if q > n:
            h *= q / n
        if h <= 0.0:
            out[j] = float(np.mean(y[idx]))
            continue
        w = tricube(dist[idx] / h) * rw[idx]
        out[j] = _local_fit(x[idx] - x0, y[idx], w, degree)
    return out


def loess_smooth(x, y, span: float = 0.75, degree: int = 1,
                 robust_iterations: int = 0) -> np.ndarray:
    """Smooth ``y`` against ``x`` and return fitted values at each ``x``.

    ``span`` is the fraction of points in each local neighbourhood. With
    ``robust_iterations > 0`` bisquare weights on the residuals are used to
    refit, damping the influence of outliers.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise LengthMismatch(f"x has {x.size} points, y has {y.size}")
    if x.ndim != 1 or x.size == 0:
        raise LengthMismatch("x and y must be non-empty 1-d sequences")
    if x.size > 1 and not np.all(np.diff(x) > 0):
        raise ValueError("x must be strictly increasing")
    if not 0.0 < span <= 1.0:
        raise SpanTooSmall(f"span must lie in (0, 1], got {span}")
    if degree not in (1, 2):
        raise ValueError("degree must be 1 or 2")
    q = int(math.floor(span * x.size + 1e-10))
    if q < degree + 1:
        raise SpanTooSmall(f"span {span} covers {q} points; degree {degree} needs {degree + 1}")

    fitted = loess_fit(x, y, q, degree)
    for _ in range(robust_iterations):
        resid = np.abs(y - fitted)
        scale = 6.0 * np.median(resid)
        if scale <= 0.0:
            break
        fitted = loess_fit(x, y, q, degree, weights=bisquare(resid / scale))
    return fitted
