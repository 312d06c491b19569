"""Linear-time bar model with single or dual baselines.

One bar per measurement at its true timestamp (no folding). Single
mode flags a bar "above" only when its value strictly exceeds the
baseline (equal counts as below); dual mode flags "inRange" when
baselineLow <= value <= baselineHigh. Clinical events ride along as
marks for the time axis.
"""

from __future__ import annotations

from dataclasses import dataclass

from cohortlab.dataset.store import PatientStore

ABOVE, BELOW, IN_RANGE, OUT_RANGE = "above", "below", "inRange", "outRange"


@dataclass(frozen=True)
class Bar:
    t: float
    value: float
    flag: str

    def to_json(self) -> dict:
        return {"t": self.t, "value": self.value, "flag": self.flag}


@dataclass(frozen=True)
class EventMark:
    kind: str
    t_start: float
    t_end: float | None

    def to_json(self) -> dict:
        return {"kind": self.kind, "tStart": self.t_start, "tEnd": self.t_end}


@dataclass
class BarModel:
    bars: list[Bar]
    baseline_low: float
    baseline_high: float | None
    event_marks: list[EventMark]
    bp_type: str

    def to_json(self) -> dict:
        return {
            "bars": [b.to_json() for b in self.bars],
            "baselineLow": self.baseline_low,
            "baselineHigh": self.baseline_high,
            "eventMarks": [m.to_json() for m in self.event_marks],
            "bpType": self.bp_type,
        }


def build_bars(store: PatientStore, uid: str, bp_type: str,
               baseline_low: float, baseline_high: float | None = None) -> BarModel:
    if baseline_high is not None and baseline_high <= baseline_low:
        raise ValueError("baseline_high must be greater than baseline_low")

    bars = []
    for t, value in store.derive(uid, bp_type):
        if baseline_high is None:
            flag = ABOVE if value > baseline_low else BELOW
        else:
            flag = IN_RANGE if baseline_low <= value <= baseline_high else OUT_RANGE
        bars.append(Bar(t=t, value=value, flag=flag))

    marks = [EventMark(kind=e.kind, t_start=e.t_start, t_end=e.t_end)
             for e in store.events_for(uid)]
    return BarModel(bars=bars, baseline_low=baseline_low, baseline_high=baseline_high,
                    event_marks=marks, bp_type=bp_type)
