"""Fold configuration, category legends, and outcome bands.

The default systolic legend follows the AHA-style cutoffs (<120 normal,
120-129 elevated, 130-139 stage1, 140-179 stage2, >= 180 crisis); the
diastolic and mean-arterial defaults are scaled companions. All legends
are overridable per request. Bands and legend colors are tokens; actual
colors belong to the renderer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from cohortlab.vis.errors import UnknownOutcomeKey


@dataclass(frozen=True)
class LegendEntry:
    upper_bound: float  # exclusive; a value belongs to the first entry with bound > value
    name: str
    color_token: str

    def to_json(self) -> dict:
        bound = None if math.isinf(self.upper_bound) else self.upper_bound
        return {"upperBound": bound, "name": self.name, "colorToken": self.color_token}


_TOKENS = ("band-1", "band-2", "band-3", "band-4", "band-5")


def _legend(bounds: tuple[float, ...], names: tuple[str, ...]) -> tuple[LegendEntry, ...]:
    return tuple(LegendEntry(b, n, t) for b, n, t in zip(bounds, names, _TOKENS))


_NAMES = ("normal", "elevated", "stage1", "stage2", "crisis")

DEFAULT_LEGENDS = {
    "sbp": _legend((120, 130, 140, 180, math.inf), _NAMES),
    "dbp": _legend((80, 90, 100, 120, math.inf), _NAMES),
    "map": _legend((93, 100, 110, 150, math.inf), _NAMES),
}


def default_legend(bp_type: str) -> tuple[LegendEntry, ...]:
    try:
        return DEFAULT_LEGENDS[bp_type]
    except KeyError:
        raise ValueError(f"unknown bp type {bp_type!r}") from None


@dataclass(frozen=True)
class FoldConfig:
    """Folding and abstraction parameters shared by matrix and wrap."""

    cycle_hours: float = 24.0
    bp_type: str = "sbp"
    legend: tuple[LegendEntry, ...] | None = None
    opacity_floor: float = 0.15
    opacity_ref_count: int = 6

    def __post_init__(self):
        if self.cycle_hours <= 0:
            raise ValueError("cycle_hours must be > 0")
        if self.bp_type not in ("sbp", "dbp", "map"):
            raise ValueError(f"unknown bp type {self.bp_type!r}")
        if not (0 < self.opacity_floor <= 1):
            raise ValueError("opacity_floor must be in (0, 1]")
        if self.opacity_ref_count < 1:
            raise ValueError("opacity_ref_count must be >= 1")
        entries = self.effective_legend()
        bounds = [e.upper_bound for e in entries]
        if any(a >= b for a, b in zip(bounds, bounds[1:])):
            raise ValueError("legend bounds must be strictly increasing")
        if not math.isinf(bounds[-1]):
            raise ValueError("last legend bound must be +inf")

    def effective_legend(self) -> tuple[LegendEntry, ...]:
        return self.legend if self.legend is not None else default_legend(self.bp_type)

    def category_for(self, value: float) -> str:
        """First legend entry whose upper bound exceeds the value."""
        for entry in self.effective_legend():
            if entry.upper_bound > value:
                return entry.name
        raise AssertionError("unreachable: last legend bound is +inf")

    def alpha_for(self, count: int) -> float:
        """Density opacity: floored linear ramp saturating at the
        reference count."""
        floor = self.opacity_floor
        return floor + (1 - floor) * min(1.0, count / self.opacity_ref_count)

    def to_json(self) -> dict:
        return {
            "cycleHours": self.cycle_hours,
            "bpType": self.bp_type,
            "legend": [e.to_json() for e in self.effective_legend()],
            "opacityFloor": self.opacity_floor,
            "opacityRefCount": self.opacity_ref_count,
        }


# ---------------------------------------------------------------------------
# outcome bands

GOOD, MODERATE, POOR, UNKNOWN = "good", "moderate", "poor", "unknown"

# (upper value inclusive, band) per recognized score family
_BAND_CUTS = {
    "mrs": ((1, GOOD), (3, MODERATE), (6, POOR)),
    "nihss": ((4, GOOD), (15, MODERATE), (math.inf, POOR)),
}


def _band_family(field_name: str) -> str | None:
    lowered = field_name.lower()
    for prefix in _BAND_CUTS:
        if lowered == prefix or lowered.startswith(prefix + "_"):
            return prefix
    return None


def is_bandable(field_name: str) -> bool:
    return _band_family(field_name) is not None


def outcome_band(field_name: str, value) -> str:
    """Map an outcome score to a coarse band token; missing -> unknown."""
    family = _band_family(field_name)
    if family is None:
        raise UnknownOutcomeKey(field_name, "no band definition for this field")
    if value is None:
        return UNKNOWN
    for upper, band in _BAND_CUTS[family]:
        if value <= upper:
            return band
    return POOR
