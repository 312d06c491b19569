import pytest

from cohortlab.dataset import Codebook, FieldDescriptor, build_store, generate


def pytest_collection_modifyitems(items):
    # the acceptance gate audits every prompt emitted by the rest of the
    # suite, so its module must run last
    items.sort(key=lambda item: item.path.name == "test_acceptance.py")


@pytest.fixture(scope="session")
def small_ds():
    return generate(120, 7)


@pytest.fixture(scope="session")
def small_store(small_ds):
    return small_ds.store()


@pytest.fixture(scope="session")
def mid_ds():
    """1000 patients, seed 1: the size the planted-proportion bounds are stated at."""
    return generate(1000, 1)


@pytest.fixture(scope="session")
def mid_store(mid_ds):
    return mid_ds.store()


def tiny_codebook() -> Codebook:
    """Minimal hand-built codebook for precise unit fixtures."""
    fd = FieldDescriptor
    return Codebook(
        (
            fd("male", "clinical", "categorical", coding={0: "female", 1: "male"}),
            fd("age", "clinical", "numeric", unit="years"),
            fd("toast", "clinical", "categorical",
               coding={1: "LAA", 2: "SVO", 3: "CE", 4: "other determined", 5: "undetermined"}),
            fd("nihss_initial", "clinical", "numeric", unit="score"),
            fd("t_hours", "bp", "numeric", unit="hours"),
            fd("sbp", "bp", "numeric", unit="mmHg"),
            fd("dbp", "bp", "numeric", unit="mmHg"),
            fd("kind", "events", "categorical",
               coding={1: "IVT", 2: "IAT", 3: "recurrence", 4: "symHT"}),
            fd("t_start_hours", "events", "numeric", unit="hours"),
            fd("t_end_hours", "events", "numeric", unit="hours"),
        ),
        dataset_name="tiny",
    )


def tiny_store(clinical_rows, bp_rows=(), event_rows=()):
    return build_store(tiny_codebook(), clinical_rows, bp_rows, event_rows)
