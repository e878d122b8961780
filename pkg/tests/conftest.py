import numpy as np
import pytest

from geowalk import _backend
from geowalk.manifolds import SphereModel, ellipsoid_model

BACKENDS = ["python"] + (["cython"] if _backend.compiled_kernels is not None else [])


@pytest.fixture
def unit_sphere():
    return SphereModel(1.0, 2)


@pytest.fixture
def unit_ball():
    return ellipsoid_model([1.0, 1.0, 1.0])


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per available kernel backend."""
    monkeypatch.setattr(_backend, "kernels", _backend.get_kernels(request.param))
    return request.param


def random_tangent(rng, n):
    g = rng.standard_normal(n.size)
    g -= g.dot(n) * n
    return g / np.linalg.norm(g)


# One line per acceptance criterion, printed at the end of the session.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
