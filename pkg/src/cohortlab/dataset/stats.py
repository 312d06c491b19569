"""Descriptive statistics over numeric samples with missing values."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class StatsSummary:
    """Five-number summary plus mean/std over the non-missing values.

    ``count`` is the number of non-missing samples and ``missing`` the
    number dropped. All other fields are None when count is 0; ``std``
    is additionally None when count is 1 (sample std uses ddof=1).
    """

    count: int
    missing: int
    mean: float | None
    std: float | None
    min: float | None
    q1: float | None
    median: float | None
    q3: float | None
    max: float | None

    def to_json(self) -> dict:
        return {
            "count": self.count,
            "missing": self.missing,
            "mean": self.mean,
            "std": self.std,
            "min": self.min,
            "q1": self.q1,
            "median": self.median,
            "q3": self.q3,
            "max": self.max,
        }


def descriptive_stats(values) -> StatsSummary:
    """Summarize a sequence of floats; None/NaN entries count as missing.

    Quartiles use linear interpolation between order statistics (the numpy
    default), so e.g. the median of [1, 2, 3, 4] is 2.5.
    """
    arr = np.asarray([np.nan if v is None else float(v) for v in values], dtype=float)
    missing = int(np.isnan(arr).sum())
    data = arr[~np.isnan(arr)]
    n = data.size
    if n == 0:
        return StatsSummary(count=0, missing=missing, mean=None, std=None,
                            min=None, q1=None, median=None, q3=None, max=None)
    q1, med, q3 = (float(q) for q in np.quantile(data, [0.25, 0.5, 0.75]))
    return StatsSummary(
        count=n,
        missing=missing,
        mean=float(data.mean()),
        std=float(data.std(ddof=1)) if n > 1 else None,
        min=float(data.min()),
        q1=q1,
        median=med,
        q3=q3,
        max=float(data.max()),
    )
