"""Temporal folding: slice a long series into cycle-length segments.

A point at time t lands in segment floor(t / cycleHours) at in-cycle
time t - idx * cycleHours. Folding partitions the input: concatenating
the segments and unfolding reproduces the series exactly.
"""

from __future__ import annotations

import math


def fold(series, cycle_hours: float) -> list[list[tuple[float, float]]]:
    """Split a sorted (t, value) series into per-cycle segments.

    Returns floor(tMax/cycleHours) + 1 segments; interior segments with
    no measurements are present as empty lists. Empty input folds to no
    segments.
    """
    if cycle_hours <= 0:
        raise ValueError("cycle_hours must be > 0")
    if not series:
        return []
    t_max = series[-1][0]
    n = int(math.floor(t_max / cycle_hours)) + 1
    segments: list[list[tuple[float, float]]] = [[] for _ in range(n)]
    for t, v in series:
        idx = int(math.floor(t / cycle_hours))
        segments[idx].append((t - idx * cycle_hours, v))
    return segments


def unfold(segments, cycle_hours: float) -> list[tuple[float, float]]:
    """Inverse of :func:`fold`."""
    out = []
    for idx, segment in enumerate(segments):
        for tic, v in segment:
            out.append((idx * cycle_hours + tic, v))
    return out


def n_windows(t_max: float, cycle_hours: float) -> int:
    return int(math.floor(t_max / cycle_hours)) + 1


def cycle_distribution(store, uids, cycle_hours: float, n_bins: int) -> list[dict]:
    """Histogram of in-cycle measurement times across a cohort.

    Bin width is cycleHours / nBins; counts sum to the cohort's total
    measurement count.
    """
    if n_bins < 1:
        raise ValueError("n_bins must be >= 1")
    if cycle_hours <= 0:
        raise ValueError("cycle_hours must be > 0")
    width = cycle_hours / n_bins
    counts = [0] * n_bins
    for uid in uids:
        t_arr, _, _ = store.bp_slice(uid)
        for t in t_arr:
            idx = int(math.floor(t / cycle_hours))
            tic = t - idx * cycle_hours
            b = min(int(math.floor(tic / width)), n_bins - 1)
            counts[b] += 1
    return [{"binStart": i * width, "count": counts[i]} for i in range(n_bins)]
