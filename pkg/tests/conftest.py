from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

from curveatlas.catalog import default_catalog
from curveatlas.curves import parse_curve
from curveatlas.rho import TranscriptCache

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=300, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture(scope="session")
def transcripts(catalog):
    cache = TranscriptCache()
    return {w.witness_id: cache.get(w) for w in catalog.witnesses}


def witness_model(record, transcript):
    """Model of a catalog witness with the generator its transcript settled on."""
    model = parse_curve(record.curve)
    gen = transcript.generator
    if gen is not None and not gen["canonical"]:
        model = parse_curve(record.curve, a_value=model.base(gen["element"]))
    return model


@pytest.fixture(scope="session")
def catalog_models(catalog, transcripts):
    return {w.witness_id: witness_model(w, transcripts[w.witness_id]) for w in catalog.witnesses}
