import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from rankintervals import IntervalFamily

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

OVERLAP3 = [(0, 2), (1, 4), (3, 5)]
STAIRCASE5 = [(0, 29), (10, 39), (20, 49), (30, 59), (40, 69)]
CHAIN3 = [(0, 1), (2, 3), (4, 5)]
ANTICHAIN3 = [(0, 10), (1, 11), (2, 12)]


@st.composite
def interval_lists(draw, min_p=1, max_p=7, distinct=False):
    """Lists of (left, right) pairs; small integer grid so ties are common
    unless ``distinct`` is set."""
    p = draw(st.integers(min_p, max_p))
    if distinct:
        pts = draw(st.permutations(range(2 * p)))
        return [tuple(sorted(pts[2 * j:2 * j + 2])) for j in range(p)]
    starts = draw(st.lists(st.integers(0, 12), min_size=p, max_size=p))
    lengths = draw(st.lists(st.integers(1, 6), min_size=p, max_size=p))
    return [(a, a + n) for a, n in zip(starts, lengths)]


def family(pairs, labels=None):
    return IntervalFamily.from_pairs(pairs, labels)


@pytest.fixture
def overlap3():
    return family(OVERLAP3)


@pytest.fixture
def staircase5():
    return family(STAIRCASE5)


_CRITERIA: list[tuple[int, str, str, str]] = []


@pytest.fixture
def record_criterion():
    """Log one acceptance line and fail the test if the criterion failed."""
    def record(number, title, status, detail=""):
        _CRITERIA.append((number, title, status, detail))
        print(f"[{status}] criterion {number}: {title} {detail}".rstrip())
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, status, detail in sorted(_CRITERIA):
        terminalreporter.write_line(f"{status:7s} {number}. {title}  {detail}".rstrip())
