import os

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from pclif.ring import Ring
from pclif.pauli import PauliElement

settings.register_profile(
    "default", deadline=None, max_examples=200, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", deadline=None, max_examples=2000)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DIMS = (2, 3, 4, 5)


@pytest.fixture(params=DIMS, ids=lambda d: f"d{d}")
def ring(request):
    return Ring(request.param)


def vectors(d, n):
    return st.lists(st.integers(0, d - 1), min_size=2 * n, max_size=2 * n).map(tuple)


def elements(d, n):
    r = Ring(d)
    return st.builds(lambda t, v: PauliElement(r, t, v), st.integers(0, d - 1), vectors(d, n))


@st.composite
def ring_and_elements(draw, k=2, max_n=3):
    d = draw(st.sampled_from(DIMS))
    n = draw(st.integers(1, max_n))
    return (Ring(d),) + tuple(draw(elements(d, n)) for _ in range(k))


# acceptance criteria report, filled by tests/test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
