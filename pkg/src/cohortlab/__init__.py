"""Cohort exploration engine for acute-stroke-style clinical data.

Provides a columnar patient store, a validated cohort-query DSL,
a natural-language-to-DSL wrangler with a metadata-only privacy guard,
temporal blood-pressure visualization models, cohort tree management,
and an HTTP API / CLI on top.
"""

__version__ = "0.1.0"

from cohortlab.dataset.codebook import Codebook, FieldDescriptor
from cohortlab.dataset.loader import load_dataset
from cohortlab.dataset.stats import StatsSummary, descriptive_stats
from cohortlab.dataset.store import (
    BpMeasurement,
    ClinicalEvent,
    PatientRecord,
    PatientStore,
)
from cohortlab.dataset.synth import generate_synthetic

__all__ = [
    "BpMeasurement",
    "ClinicalEvent",
    "Codebook",
    "FieldDescriptor",
    "PatientRecord",
    "PatientStore",
    "StatsSummary",
    "descriptive_stats",
    "generate_synthetic",
    "load_dataset",
]
