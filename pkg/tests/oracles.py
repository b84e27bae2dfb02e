"""Independent reference implementations used as test oracles.

These deliberately avoid the package's own evaluation paths: the curve
oracle runs the triangular de Boor recurrence over control points rather
than summing basis functions.
"""

import numpy as np


def de_boor_point(points: np.ndarray, order: int, knots: np.ndarray, t: float) -> np.ndarray:
    """Evaluate a clamped B-spline at ``t`` by knot-insertion averaging."""
    degree = order - 1
    n = points.shape[0]
    span = None
    for j in range(degree, n):
        if knots[j] <= t < knots[j + 1]:
            span = j
            break
    if span is None:  # t at the curve end: last non-empty span
        span = next(j for j in range(n - 1, degree - 1, -1) if knots[j] < knots[j + 1])
    d = [points[j + span - degree].astype(float).copy() for j in range(degree + 1)]
    for r in range(1, degree + 1):
        for j in range(degree, r - 1, -1):
            denom = knots[j + 1 + span - r] - knots[j + span - degree]
            alpha = 0.0 if denom == 0 else (t - knots[j + span - degree]) / denom
            d[j] = (1.0 - alpha) * d[j - 1] + alpha * d[j]
    return d[degree]
