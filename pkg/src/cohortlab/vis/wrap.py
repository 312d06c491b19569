"""Slice-and-wrap geometry: one polar spline ring per cycle segment.

Angle encodes in-cycle time (0 at 12 o'clock, increasing clockwise),
radius encodes the BP value linearly between bpLo and bpHi (values
outside are pinned to the rim). Knots are joined per segment with a
centripetal Catmull-Rom curve; segments are independent rings, so there
is no smoothing across the cycle boundary. Coordinates are a y-up unit
frame with the wrap center at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from cohortlab.dataset.store import PatientStore
from cohortlab.vis.folding import fold
from cohortlab.vis.spline import catmull_rom_chain


@dataclass(frozen=True)
class WrapConfig:
    cycle_hours: float = 24.0
    bp_type: str = "sbp"
    baseline: float = 120.0
    r_min: float = 0.3
    r_max: float = 1.0
    bp_lo: float = 60.0
    bp_hi: float = 220.0
    samples_per_span: int = 16

    def __post_init__(self):
        if self.cycle_hours <= 0:
            raise ValueError("cycle_hours must be > 0")
        if self.bp_type not in ("sbp", "dbp", "map"):
            raise ValueError(f"unknown bp type {self.bp_type!r}")
        if not (0 < self.r_min < self.r_max <= 1):
            raise ValueError("need 0 < r_min < r_max <= 1")
        if self.bp_lo >= self.bp_hi:
            raise ValueError("need bp_lo < bp_hi")
        if self.samples_per_span < 2:
            raise ValueError("samples_per_span must be >= 2")

    def radius_of(self, value: float) -> float:
        v = min(max(value, self.bp_lo), self.bp_hi)
        frac = (v - self.bp_lo) / (self.bp_hi - self.bp_lo)
        return self.r_min + frac * (self.r_max - self.r_min)

    def to_json(self) -> dict:
        return {
            "cycleHours": self.cycle_hours,
            "bpType": self.bp_type,
            "baseline": self.baseline,
            "rMin": self.r_min,
            "rMax": self.r_max,
            "bpLo": self.bp_lo,
            "bpHi": self.bp_hi,
            "samplesPerSpan": self.samples_per_span,
        }


@dataclass(frozen=True)
class WrapKnot:
    t_in_cycle: float
    value: float
    theta: float
    radius: float
    x: float
    y: float

    def to_json(self) -> dict:
        return {
            "tInCycle": self.t_in_cycle,
            "value": self.value,
            "theta": self.theta,
            "radius": self.radius,
            "x": self.x,
            "y": self.y,
        }


@dataclass
class WrapSegment:
    segment_idx: int
    samples: np.ndarray  # (N, 2)
    knot_flags: np.ndarray  # (N,) bool
    above_baseline: np.ndarray  # (N,) bool
    stroke_alpha: float
    knots: list[WrapKnot]

    def to_json(self) -> dict:
        return {
            "segmentIdx": self.segment_idx,
            "samples": [[float(x), float(y)] for x, y in self.samples],
            "knotFlags": [bool(b) for b in self.knot_flags],
            "aboveBaseline": [bool(b) for b in self.above_baseline],
            "strokeAlpha": self.stroke_alpha,
            "knots": [k.to_json() for k in self.knots],
        }


@dataclass
class WrapGeometry:
    segments: list[WrapSegment]
    baseline_radius: float
    config: WrapConfig

    def to_json(self) -> dict:
        return {
            "segments": [s.to_json() for s in self.segments],
            "baselineRadius": self.baseline_radius,
            "config": self.config.to_json(),
        }


def build_wrap(store: PatientStore, uid: str, cfg: WrapConfig) -> WrapGeometry:
    """Wrap one patient's series into per-segment polar spline rings.

    Segments without measurements are omitted; a one-measurement segment
    degenerates to a single flagged dot. Every segment of a patient gets
    the same stroke alpha, clamp(1.6/S, 0.08, 0.8) for S non-empty
    segments, so recurring daily patterns accumulate ink.
    """
    series = store.derive(uid, cfg.bp_type)
    segments_points = fold(series, cfg.cycle_hours)
    non_empty = [(idx, seg) for idx, seg in enumerate(segments_points) if seg]
    s_count = len(non_empty)
    if s_count:
        stroke_alpha = min(max(1.6 / s_count, 0.08), 0.8)
    else:
        stroke_alpha = 0.8

    baseline_radius = cfg.radius_of(cfg.baseline)
    out_segments = []
    for idx, seg in non_empty:
        knots = []
        for tic, value in seg:
            theta = 2 * math.pi * tic / cfg.cycle_hours
            radius = cfg.radius_of(value)
            knots.append(WrapKnot(
                t_in_cycle=tic,
                value=value,
                theta=theta,
                radius=radius,
                x=radius * math.sin(theta),
                y=radius * math.cos(theta),
            ))
        coords = [(k.x, k.y) for k in knots]
        samples, flags = catmull_rom_chain(coords, cfg.samples_per_span)
        radii = np.linalg.norm(samples, axis=1)
        out_segments.append(WrapSegment(
            segment_idx=idx,
            samples=samples,
            knot_flags=flags,
            above_baseline=radii > baseline_radius,
            stroke_alpha=stroke_alpha,
            knots=knots,
        ))
    return WrapGeometry(segments=out_segments, baseline_radius=baseline_radius, config=cfg)
