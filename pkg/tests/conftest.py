import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from slicequat import Quaternion, SlicePolynomial

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

finite = st.floats(min_value=-2.0, max_value=2.0, allow_nan=False, allow_infinity=False)
quaternions = st.builds(Quaternion, finite, finite, finite, finite)


@st.composite
def unit_vectors(draw):
    v = np.array([draw(finite), draw(finite), draw(finite)])
    n = np.linalg.norm(v)
    if n < 1e-3:
        v, n = np.array([0.0, 0.0, 1.0]), 1.0
    return v / n


@st.composite
def polynomials(draw, max_degree=5, bound=1.0):
    deg = draw(st.integers(0, max_degree))
    entries = st.floats(min_value=-bound, max_value=bound, allow_nan=False)
    rows = [[draw(entries) for _ in range(4)] for _ in range(deg + 1)]
    return SlicePolynomial(rows)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def qclose(a, b, tol):
    return (Quaternion.from_array(np.asarray(a)) - Quaternion.from_array(np.asarray(b))).norm() <= tol


# one line per acceptance criterion, filled by test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: s.split()[1]):
            terminalreporter.write_line(line)
