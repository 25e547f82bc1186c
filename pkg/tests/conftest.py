import numpy as np
import pytest

from jacksonlab.models import build_circle, build_hermite, build_sphere, build_torus


def reference_models():
    return [build_circle(16), build_torus(8, 2), build_sphere(16), build_hermite(64)]


def small_models():
    return [build_circle(8), build_torus(4, 2), build_sphere(5), build_hermite(24)]


@pytest.fixture(scope="module", params=small_models(), ids=lambda m: m.name)
def model(request):
    return request.param


def random_unit(model, rng):
    v = rng.standard_normal(model.size) + 1j * rng.standard_normal(model.size)
    return model.coeffs(v / np.linalg.norm(v))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


#: one line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
