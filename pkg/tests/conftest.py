import pytest

from pvqed import kernels
from pvqed.pvscheme import make_scheme
from pvqed.quadrature import QuadratureConfig

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def s123():
    return make_scheme(1.0, 2.0, 3.0)


@pytest.fixture(scope="session")
def s1_10_100():
    return make_scheme(1.0, 10.0, 100.0)


@pytest.fixture(scope="session")
def s1_100_1000():
    return make_scheme(1.0, 100.0, 1000.0)


@pytest.fixture(scope="session")
def tight():
    return QuadratureConfig(rel_tol=1e-12, abs_tol=1e-16)


def _available_backends():
    names = ["python"]
    try:
        kernels.backend_module("cython")
    except ImportError:
        pass
    else:
        names.append("cython")
    return names


BACKENDS = _available_backends()


@pytest.fixture(params=BACKENDS)
def backend(request):
    return kernels.backend_module(request.param)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
