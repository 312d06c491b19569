"""Scripted completions for the bundled demo requests.

These drive the offline demo and the replay tests: four canonical
requests over the synthetic stroke codebook, including one that asks
for a concept the schema cannot express and must surface as a
missing-field failure rather than a wrong query.
"""

from __future__ import annotations

from .providers import MockProvider

REQUEST_ELDERLY_MALE_LAA = "Elderly male patients who suffered a stroke due to the LAA."
REQUEST_SBP_ABOVE_160 = "Patients whose SBP rose above 160 mmHg within 48 hours."
REQUEST_SBP_AT_LEAST_180 = "Patients who showed SBP of 180 mmHg or above within 48 hours."
REQUEST_ANTIPLATELET_TIMING = (
    "patients who showed SBP >= 180 mmHg and received an antiplatelet agent within 48 hours"
)

_ELDERLY_MALE_LAA_RESPONSE = """\
NORMALIZATION: "male patients" -> male == 1 (male); "elderly" -> age >= 65 (age); "stroke due to the LAA" -> toast == 1 (toast)
ROI: clinical.male, clinical.age, clinical.toast
INFERENCE: Elderly patients are typically considered to be 65 years or older, so the age cutoff is age >= 65. Male patients map to male == 1 and large artery atherosclerosis is toast code 1.
DSL: male == 1 and age >= 65 and toast == 1"""

_SBP_ABOVE_160_RESPONSE = """\
NORMALIZATION: "SBP" -> bp.sbp (sbp); "rose above 160 mmHg" -> value > 160; "within 48 hours" -> hours(0,48)
ROI: bp.sbp
INFERENCE: Rose above is a strict comparison, so any systolic measurement strictly above 160 inside the first 48 hours qualifies a patient.
DSL: exists(bp.sbp, hours(0,48), value > 160)"""

_SBP_AT_LEAST_180_RESPONSE = """\
NORMALIZATION: "SBP of 180 mmHg or above" -> value >= 180 (sbp); "within 48 hours" -> hours(0,48)
ROI: bp.sbp
INFERENCE: Or above makes the threshold inclusive, so any systolic measurement of at least 180 within the first 48 hours qualifies.
DSL: exists(bp.sbp, hours(0,48), value >= 180)"""

_ANTIPLATELET_TIMING_RESPONSE = """\
NORMALIZATION: "SBP >= 180 mmHg" -> value >= 180 (sbp); "within 48 hours" -> hours(0,48); "received an antiplatelet agent within 48 hours" -> timing of antiplatelet administration
ROI: bp.sbp, clinical.antiplatelet
INFERENCE: The blood pressure condition is expressible, but the schema only records whether antiplatelet therapy was given, not when, so the timing condition cannot be written as a query.
DSL: REQUIRES_FIELD("antiplatelet therapy administration")"""

DEFAULT_FIXTURES: dict[str, str] = {
    REQUEST_ELDERLY_MALE_LAA: _ELDERLY_MALE_LAA_RESPONSE,
    REQUEST_SBP_ABOVE_160: _SBP_ABOVE_160_RESPONSE,
    REQUEST_SBP_AT_LEAST_180: _SBP_AT_LEAST_180_RESPONSE,
    REQUEST_ANTIPLATELET_TIMING: _ANTIPLATELET_TIMING_RESPONSE,
}


def default_mock_provider() -> MockProvider:
    return MockProvider(DEFAULT_FIXTURES)
