import os
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def unit_rationals(max_den=12):
    """Reduced fractions strictly inside (0, 1)."""
    return st.integers(2, max_den).flatmap(lambda q: st.integers(1, q - 1).map(lambda p: Fraction(p, q)))


@st.composite
def two_leg_lens(draw, max_den=9):
    """(r1, r2) with r1 >= r2 and r1 + r2 < 1, i.e. a negative-definite M(-1; r1, r2)."""
    r1 = draw(unit_rationals(max_den))
    r2 = draw(unit_rationals(max_den).filter(lambda r: r <= r1 and r + r1 < 1))
    return r1, r2


def random_two_leg(rng: random.Random, max_den=9):
    while True:
        q1, q2 = rng.randint(2, max_den), rng.randint(2, max_den)
        r1, r2 = sorted((Fraction(rng.randint(1, q1 - 1), q1), Fraction(rng.randint(1, q2 - 1), q2)), reverse=True)
        e0 = rng.choice((-1, -2, -3))
        if e0 + r1 + r2 < 0:
            return e0, (r1, r2)


@pytest.fixture
def rng():
    return random.Random(20261016)


# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[1])):
            terminalreporter.write_line(line)
