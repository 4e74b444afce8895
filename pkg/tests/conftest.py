import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from stabforge.groups import make_group

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# presentations used across the exhaustive suites
SMALL = [(1,), (2,), (3,), (4,), (5,), (6,), (7,), (8,), (2, 2), (2, 4), (4, 2), (2, 2, 2)]
UP_TO_16 = SMALL + [(9,), (10,), (11,), (12,), (13,), (14,), (15,), (16,), (3, 3), (2, 6), (6, 2),
                    (3, 4), (4, 4), (2, 8), (2, 2, 4), (2, 2, 2, 2), (3, 5)]
UP_TO_12 = [o for o in UP_TO_16 if np.prod(o) <= 12]
UP_TO_8 = [o for o in UP_TO_16 if np.prod(o) <= 8]


def gid(o):
    return "x".join(f"Z{d}" for d in o)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


orders_st = st.lists(st.integers(1, 6), min_size=1, max_size=3).filter(lambda o: int(np.prod(o)) <= 24)
group_st = orders_st.map(make_group)


@st.composite
def group_and_elements(draw, k=2):
    A = draw(group_st)
    elems = [tuple(draw(st.integers(0, d - 1)) for d in A.orders) for _ in range(k)]
    return (A, *elems)


# acceptance criteria report: one line per criterion, printed after the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
