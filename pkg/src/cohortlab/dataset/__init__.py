from cohortlab.dataset.codebook import Codebook, FieldDescriptor
from cohortlab.dataset.errors import (
    DatasetError,
    FormatError,
    IntegrityError,
    SchemaError,
    UnknownUid,
)
from cohortlab.dataset.loader import load_dataset
from cohortlab.dataset.stats import StatsSummary, descriptive_stats
from cohortlab.dataset.store import (
    BpMeasurement,
    ClinicalEvent,
    PatientRecord,
    PatientStore,
    build_store,
)
from cohortlab.dataset.synth import (
    SyntheticDataset,
    default_codebook,
    generate,
    generate_synthetic,
)

__all__ = [
    "BpMeasurement",
    "ClinicalEvent",
    "Codebook",
    "DatasetError",
    "FieldDescriptor",
    "FormatError",
    "IntegrityError",
    "PatientRecord",
    "PatientStore",
    "SchemaError",
    "StatsSummary",
    "SyntheticDataset",
    "UnknownUid",
    "build_store",
    "default_codebook",
    "descriptive_stats",
    "generate",
    "generate_synthetic",
    "load_dataset",
]
