from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from parity_cf.exact_arith import QuadraticSurd
from parity_cf.oracle import sample_surds

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

RADICANDS = [2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23]


@st.composite
def surds(draw, max_coef: int = 30):
    """Irrational (a + b sqrt(d))/c."""
    a = draw(st.integers(-max_coef, max_coef))
    b = draw(st.integers(-max_coef, max_coef).filter(bool))
    c = draw(st.integers(1, max_coef))
    d = draw(st.sampled_from(RADICANDS))
    return QuadraticSurd(a, b, c, d)


@st.composite
def unit_surds(draw):
    """Irrationals in (0, 1)."""
    x = draw(surds())
    return x - x.__floor__()


def F(s: str) -> Fraction:
    return Fraction(s)


@pytest.fixture
def rt2m1():
    return QuadraticSurd(-1, 1, 1, 2)


@pytest.fixture
def phi():
    return QuadraticSurd(1, 1, 2, 5)


@pytest.fixture(scope="session")
def sample10():
    return sample_surds(10)


# criterion number -> (passed, seconds, note); filled by test_acceptance
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, secs, note = ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {note} ({secs:.2f} s)")
