"""Seeded synthetic stroke-admission dataset generator.

The generator plants the sub-populations the rest of the toolkit is
exercised against, with fixed proportions:

* elevated admission blood pressure: most patients start above
  160 mmHg systolic and decay toward a post-acute level over days;
* a sustained-high group (~6%) whose systolic pressure plateaus at
  >= 180 mmHg through at least the first eight days;
* a U-shaped post-thrombectomy dip (~35% of IAT patients): pressure
  falls along a parabola for 24 h after the procedure and recovers,
  with a symptomatic-hemorrhage event on the recovery limb and a much
  higher urokinase rate than the rest of the cohort;
* a "triangular" measurement regime (~30% of week-or-longer stays):
  after a stabilization day, measurements happen at exactly 08:00,
  12:00 and 20:00 of each onset-anchored day;
* otherwise irregular sampling with log-normal inter-arrival gaps
  (median ~5 h, clipped to 1.5..16 h), i.e. typically 2-6
  measurements per day.

Output is deterministic down to the byte for a fixed (n_patients,
seed): one RNG stream, fixed patient order, fixed CSV formatting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from cohortlab.dataset.codebook import Codebook, FieldDescriptor
from cohortlab.dataset.loader import (
    BP_FILE,
    CLINICAL_FILE,
    CODEBOOK_FILE,
    EVENTS_FILE,
    write_dataset,
)
from cohortlab.dataset.store import PatientStore, build_store

YES_NO = {0: "no", 1: "yes"}

MRS_CODING = {
    0: "no symptoms",
    1: "no significant disability",
    2: "slight disability",
    3: "moderate disability",
    4: "moderately severe disability",
    5: "severe disability",
    6: "dead",
}

EVENT_CODING = {1: "IVT", 2: "IAT", 3: "recurrence", 4: "symHT"}


def default_codebook() -> Codebook:
    fd = FieldDescriptor
    fields = (
        fd("male", "clinical", "categorical", coding={0: "female", 1: "male"},
           description="patient sex"),
        fd("age", "clinical", "numeric", unit="years", description="age at admission"),
        fd("toast", "clinical", "categorical",
           coding={1: "LAA", 2: "SVO", 3: "CE", 4: "other determined", 5: "undetermined"},
           description="TOAST stroke-subtype classification"),
        fd("nihss_initial", "clinical", "numeric", unit="score",
           description="NIH stroke scale at admission (0-42)"),
        fd("mrs_discharge", "clinical", "categorical", coding=MRS_CODING,
           description="modified Rankin scale at discharge"),
        fd("mrs_3mo", "clinical", "categorical", coding=MRS_CODING,
           description="modified Rankin scale at 3-month follow-up"),
        fd("hypertension", "clinical", "categorical", coding=YES_NO,
           description="history of hypertension"),
        fd("diabetes", "clinical", "categorical", coding=YES_NO,
           description="history of diabetes mellitus"),
        fd("dyslipidemia", "clinical", "categorical", coding=YES_NO,
           description="history of dyslipidemia"),
        fd("atrial_fibrillation", "clinical", "categorical", coding=YES_NO,
           description="history of atrial fibrillation"),
        fd("smoking", "clinical", "categorical",
           coding={0: "never", 1: "former", 2: "current"},
           description="smoking status"),
        fd("prior_stroke", "clinical", "categorical", coding=YES_NO,
           description="previous stroke or TIA"),
        fd("ivt", "clinical", "categorical", coding=YES_NO,
           description="intravenous thrombolysis performed"),
        fd("iat", "clinical", "categorical", coding=YES_NO,
           description="intra-arterial thrombectomy performed"),
        fd("urokinase", "clinical", "categorical", coding=YES_NO,
           description="urokinase administered during procedure"),
        fd("antiplatelet", "clinical", "categorical", coding=YES_NO,
           description="on antiplatelet medication at discharge"),
        fd("onset_to_admission_hours", "clinical", "numeric", unit="hours",
           description="delay from symptom onset to hospital arrival"),
        fd("ia_surgery_minutes", "clinical", "numeric", unit="minutes",
           description="duration of the intra-arterial procedure"),
        fd("admission_days", "clinical", "numeric", unit="days",
           description="length of hospital stay"),
        fd("hospital_id", "clinical", "categorical",
           coding={1: "hospital A", 2: "hospital B", 3: "hospital C",
                   4: "hospital D", 5: "hospital E", 6: "hospital F"},
           description="admitting center"),
        fd("t_hours", "bp", "numeric", unit="hours",
           description="measurement time since stroke onset"),
        fd("sbp", "bp", "numeric", unit="mmHg", description="systolic blood pressure"),
        fd("dbp", "bp", "numeric", unit="mmHg", description="diastolic blood pressure"),
        fd("kind", "events", "categorical", coding=EVENT_CODING,
           description="clinical event type"),
        fd("t_start_hours", "events", "numeric", unit="hours",
           description="event start since stroke onset"),
        fd("t_end_hours", "events", "numeric", unit="hours",
           description="event end since stroke onset (empty for point events)"),
    )
    return Codebook(fields, dataset_name="synthetic-stroke", version="1")


@dataclass
class SyntheticDataset:
    """In-memory form of one generated dataset."""

    codebook: Codebook
    clinical_rows: list[dict]
    bp_rows: list[tuple]
    event_rows: list[tuple]

    def store(self) -> PatientStore:
        return build_store(self.codebook, self.clinical_rows, self.bp_rows, self.event_rows)

    def write(self, out_dir: str | Path) -> list[Path]:
        out = Path(out_dir)
        write_dataset(out, self.codebook, self.clinical_rows, self.bp_rows, self.event_rows)
        return [out / CODEBOOK_FILE, out / CLINICAL_FILE, out / BP_FILE, out / EVENTS_FILE]


def _round2(v: float) -> float:
    # values are stored pre-rounded so the in-memory store equals the
    # store loaded back from CSV
    return float(f"{v:.2f}")


def generate(n_patients: int, seed: int) -> SyntheticDataset:
    if n_patients < 1:
        raise ValueError("n_patients must be >= 1")
    rng = np.random.default_rng(seed)
    codebook = default_codebook()

    clinical_rows: list[dict] = []
    bp_rows: list[tuple] = []
    event_rows: list[tuple] = []

    for i in range(n_patients):
        uid = f"p{i:05d}"
        row: dict = {"uid": uid}

        male = int(rng.random() < 0.58)
        age = float(int(np.clip(rng.normal(68, 13), 19, 99)))
        toast = int(rng.choice([1, 2, 3, 4, 5], p=[0.35, 0.22, 0.20, 0.08, 0.15]))
        nihss = float(int(np.clip(rng.gamma(2.2, 3.2), 0, 42)))
        hypertension = int(rng.random() < 0.65)
        diabetes = int(rng.random() < 0.30)
        dyslipidemia = int(rng.random() < 0.35)
        af = int(rng.random() < (0.70 if toast == 3 else 0.12))
        smoking = int(rng.choice([0, 1, 2], p=[0.50, 0.25, 0.25]))
        prior_stroke = int(rng.random() < 0.18)
        ivt = int(rng.random() < 0.25)
        iat = int(rng.random() < 0.18)
        antiplatelet = int(rng.random() < 0.70)
        onset_to_admission = float(np.clip(rng.lognormal(1.2, 0.9), 0.25, 72.0))
        hospital = int(rng.integers(1, 7))

        ushape = bool(iat and rng.random() < 0.35)
        urokinase = int(rng.random() < (0.80 if ushape else 0.15))
        sustained_high = rng.random() < 0.06

        ia_minutes = float(np.clip(rng.normal(95, 30), 20, 300)) if iat else None

        stay_days = float(np.clip(rng.lognormal(math.log(8.0), 0.45), 2.0, 21.0))
        if sustained_high:
            stay_days = max(stay_days, 9.5)

        surgery_start = surgery_end = None
        if iat:
            surgery_start = onset_to_admission + rng.uniform(1.0, 3.0)
            surgery_end = surgery_start + ia_minutes / 60.0
            if ushape:
                # dip window plus a full recovery day must fit in the stay
                stay_days = max(stay_days, (surgery_end + 24.0) / 24.0 + 1.0)

        # outcome tied loosely to severity
        sev = min(6, int(nihss // 6) + int(rng.random() < 0.3))
        mrs_discharge = int(np.clip(sev + rng.integers(-1, 2), 0, 6))
        if rng.random() < 0.10:
            mrs_3mo = None
        else:
            mrs_3mo = int(np.clip(mrs_discharge + rng.integers(-2, 2), 0, 6))

        row.update({
            "male": float(male),
            "age": age,
            "toast": float(toast),
            "nihss_initial": None if rng.random() < 0.05 else nihss,
            "mrs_discharge": float(mrs_discharge),
            "mrs_3mo": None if mrs_3mo is None else float(mrs_3mo),
            "hypertension": float(hypertension),
            "diabetes": float(diabetes),
            "dyslipidemia": float(dyslipidemia),
            "atrial_fibrillation": float(af),
            "smoking": float(smoking),
            "prior_stroke": float(prior_stroke),
            "ivt": float(ivt),
            "iat": float(iat),
            "urokinase": float(urokinase),
            "antiplatelet": float(antiplatelet),
            "onset_to_admission_hours": _round2(onset_to_admission),
            "ia_surgery_minutes": None if ia_minutes is None else _round2(ia_minutes),
            "admission_days": _round2(stay_days),
            "hospital_id": float(hospital),
        })
        clinical_rows.append(row)

        # ---- blood-pressure trajectory ---------------------------------
        t_end = stay_days * 24.0
        admit_level = float(np.clip(rng.normal(172, 20), 110, 240))
        post_level = float(np.clip(rng.normal(142, 12), 105, 180))
        tau = rng.uniform(30.0, 60.0)
        plateau_level = max(admit_level, float(rng.normal(192, 6))) if sustained_high else None
        dbp_ratio = float(np.clip(rng.normal(0.58, 0.05), 0.45, 0.75))

        triangular = stay_days >= 7.0 and rng.random() < 0.30
        stab_day = int(rng.integers(2, 5)) if triangular else None

        times: list[float] = []
        t = onset_to_admission
        cutoff = t_end if stab_day is None else min(t_end, stab_day * 24.0 + 7.9)
        while t < cutoff:
            times.append(t)
            t += float(np.clip(rng.lognormal(math.log(5.0), 0.45), 1.5, 16.0))
        if stab_day is not None:
            day = stab_day
            while day * 24.0 + 8.0 < t_end:
                for hour in (8.0, 12.0, 20.0):
                    tt = day * 24.0 + hour
                    if tt < t_end:
                        times.append(tt)
                day += 1

        for t in times:
            elapsed = t - onset_to_admission
            if sustained_high and t < 8.5 * 24.0:
                sbp = plateau_level + rng.normal(0, 4)
                sbp = max(sbp, 181.0)
            else:
                sbp = post_level + (admit_level - post_level) * math.exp(-elapsed / tau)
                sbp += rng.normal(0, 6)
            if ushape and surgery_end <= t <= surgery_end + 24.0:
                # subtractive parabola: zero at both window edges, deepest
                # at the midpoint
                x = (t - (surgery_end + 12.0)) / 12.0
                sbp -= rng.normal(45, 4) * (1.0 - x * x)
            sbp = float(np.clip(sbp, 75.0, 260.0))
            dbp = float(np.clip(sbp * dbp_ratio + rng.normal(0, 4), 35.0, sbp))
            bp_rows.append((uid, float(f"{t:.4f}"), float(f"{sbp:.1f}"), float(f"{dbp:.1f}")))

        # ---- events ----------------------------------------------------
        events: list[tuple[float, str, float | None]] = []
        if ivt:
            events.append((onset_to_admission + rng.uniform(0.5, 1.5), "IVT", None))
        if iat:
            events.append((surgery_start, "IAT", surgery_end))
        if ushape:
            # on the recovery limb of the dip
            events.append((surgery_end + rng.uniform(14.0, 22.0), "symHT", None))
        if stay_days > 3.0 and rng.random() < 0.04:
            events.append((rng.uniform(48.0, t_end * 0.9), "recurrence", None))
        for t0, kind, t1 in sorted(events, key=lambda e: e[0]):
            event_rows.append((
                uid, kind, float(f"{t0:.4f}"),
                None if t1 is None else float(f"{t1:.4f}"),
            ))

    return SyntheticDataset(codebook, clinical_rows, bp_rows, event_rows)


def generate_synthetic(n_patients: int, seed: int, out_dir: str | Path) -> list[Path]:
    """Generate a dataset and write the four files under ``out_dir``."""
    return generate(n_patients, seed).write(out_dir)
