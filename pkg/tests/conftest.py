import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from hypwigner.config import DEFAULT_KAPPA
from hypwigner.geometry import Model

settings.register_profile("default", deadline=None, max_examples=50, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def model_named(name: str) -> Model:
    return Model.parse(name, DEFAULT_KAPPA[name])


@pytest.fixture(params=["interval", "disc", "ball:3"])
def model(request):
    return model_named(request.param)


@pytest.fixture
def disc():
    return model_named("disc")


@pytest.fixture
def interval():
    return model_named("interval")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
