"""Centripetal Catmull-Rom spline through 2D knots.

Barry-Goldman pyramid evaluation with alpha = 0.5 knot spacing and
duplicated endpoints, so the curve starts and ends exactly on the first
and last knot and passes through every knot in between. Samples that
fall on a knot are snapped to the exact knot coordinates, which keeps
the interpolation property immune to rounding.
"""

from __future__ import annotations

import numpy as np

_EPS = 1e-9


def _knot_params(points: np.ndarray, alpha: float) -> np.ndarray:
    deltas = np.linalg.norm(np.diff(points, axis=0), axis=1)
    steps = np.maximum(deltas ** alpha, _EPS)
    return np.concatenate(([0.0], np.cumsum(steps)))


def _span(p0, p1, p2, p3, t0, t1, t2, t3, ts):
    """Barry-Goldman evaluation of one span on parameter values ts."""
    ts = ts[:, None]

    def lerp(a, b, ta, tb):
        w = (ts - ta) / (tb - ta)
        return (1 - w) * a + w * b

    a1 = lerp(p0, p1, t0, t1)
    a2 = lerp(p1, p2, t1, t2)
    a3 = lerp(p2, p3, t2, t3)
    b1 = lerp(a1, a2, t0, t2)
    b2 = lerp(a2, a3, t1, t3)
    return lerp(b1, b2, t1, t2)


def catmull_rom_chain(knots, samples_per_span: int, alpha: float = 0.5):
    """Sample a centripetal Catmull-Rom curve through the knots.

    Returns (samples, knot_flags): an (N, 2) float array of points and a
    boolean array marking the samples that are knots. A single knot
    yields itself. samples_per_span counts the samples on each span
    including both ends; interior knots are not duplicated.
    """
    if samples_per_span < 2:
        raise ValueError("samples_per_span must be >= 2")
    pts = np.asarray(knots, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("knots must be an (n, 2) array")
    n = len(pts)
    if n == 0:
        raise ValueError("need at least one knot")
    if n == 1:
        return pts.copy(), np.asarray([True])

    controls = np.concatenate(([pts[0]], pts, [pts[-1]]))
    t = _knot_params(controls, alpha)

    all_samples = []
    all_flags = []
    for i in range(n - 1):
        p0, p1, p2, p3 = controls[i], controls[i + 1], controls[i + 2], controls[i + 3]
        t0, t1, t2, t3 = t[i], t[i + 1], t[i + 2], t[i + 3]
        ts = np.linspace(t1, t2, samples_per_span)
        span = _span(p0, p1, p2, p3, t0, t1, t2, t3, ts)
        span[0] = p1  # snap ends to the exact knot coordinates
        span[-1] = p2
        flags = np.zeros(samples_per_span, dtype=bool)
        flags[0] = flags[-1] = True
        if i > 0:
            span = span[1:]
            flags = flags[1:]
        all_samples.append(span)
        all_flags.append(flags)

    return np.concatenate(all_samples), np.concatenate(all_flags)
