from pathlib import Path

import pytest

from flowsketch.config.settings import Settings
from flowsketch.engine.traffic import exact_counts, generate_trace, zipf_model
from flowsketch.services.experiment import ExperimentService

GOLDENS = Path(__file__).resolve().parent / "goldens"


@pytest.fixture(scope="session")
def goldens() -> Path:
    return GOLDENS


@pytest.fixture(scope="session")
def default_model():
    return zipf_model(7_000, 1.1)


@pytest.fixture(scope="session")
def default_trace(default_model):
    """The 550,000-packet, 7,000-flow, alpha=1.1 trace for seed 42."""
    return generate_trace(default_model, 550_000, 42)


@pytest.fixture(scope="session")
def default_oracle(default_trace):
    return exact_counts(default_trace)


@pytest.fixture
def service() -> ExperimentService:
    return ExperimentService(Settings())
