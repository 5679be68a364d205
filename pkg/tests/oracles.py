"""Independent reference implementations used to check the package.

These are written from the textbook definitions, deliberately slow and
without sharing code with ``tsllm``.
"""

from decimal import ROUND_HALF_EVEN, Decimal

import numpy as np


def loess_point(x, y, x0, q, degree):
    """Local polynomial fit at x0 by explicit weighted least squares."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    n = len(x)
    d = np.abs(x - x0)
    order = np.argsort(d, kind="stable")
    h = d[order[min(q, n) - 1]]
    if q > n:
        h = h * q / n
    w = np.zeros(n)
    for i in range(n):
        u = d[i] / h if h > 0 else 0.0
        w[i] = (1 - u ** 3) ** 3 if u < 1 else 0.0
    cols = [np.ones(n)] + [(x - x0) ** k for k in range(1, degree + 1)]
    A = np.column_stack(cols)
    W = np.diag(w)
    beta = np.linalg.solve(A.T @ W @ A, A.T @ W @ y)
    return beta[0]


def pop_var(v):
    v = [float(t) for t in v]
    m = sum(v) / len(v)
    return sum((t - m) ** 2 for t in v) / len(v)


def strength(component, residual):
    return max(0.0, 1.0 - pop_var(residual) / pop_var([a + b for a, b in zip(component, residual)]))


def sorted_median(values):
    s = sorted(values)
    n = len(s)
    mid = n // 2
    return float(s[mid]) if n % 2 else (s[mid - 1] + s[mid]) / 2.0


def pearson(x, y):
    n = len(x)
    mx, my = sum(x) / n, sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    return sxy / (sxx * syy) ** 0.5


def digit_string(v, precision):
    """Digit encoding of one value built with Decimal arithmetic."""
    q = Decimal(float(v)).quantize(Decimal(1).scaleb(-precision), rounding=ROUND_HALF_EVEN)
    neg = q < 0 and q != 0
    digits = str(abs(q)).replace(".", "").lstrip("0") or "0"
    return ("- " if neg else "") + " ".join(digits)
