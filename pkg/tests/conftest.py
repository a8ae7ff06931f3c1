import random

import pytest
from hypothesis import strategies as st

from mlrtree import GridParams, Point, ThreeSidedQuery

FIVE = [Point(1, 5), Point(2, 3), Point(4, 4), Point(5, 1), Point(6, 6)]


def brute(points, q):
    """Skyline by repeated max-x extraction; independent of both testkit oracles."""
    out = []
    a, b, d = q.a, q.b, q.d
    while True:
        cand = [p for p in points if a <= p.x <= b and p.y <= d]
        if not cand:
            return out
        z = max(cand, key=lambda p: p.x)
        out.append(z)
        b, d = z.x - 1, z.y - 1


def random_points(rng, n, m):
    xs = rng.sample(range(1, m + 1), n)
    ys = rng.sample(range(1, m + 1), n)
    return [Point(x, y) for x, y in zip(xs, ys)]


def random_query(rng, m):
    a = rng.randint(1, m)
    b = rng.randint(a, m)
    return ThreeSidedQuery(a, b, rng.randint(1, m))


@st.composite
def point_sets(draw, max_n=40, max_m=64):
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(0, min(max_n, m)))
    xs = draw(st.permutations(range(1, m + 1)))[:n]
    ys = draw(st.permutations(range(1, m + 1)))[:n]
    return GridParams(m), [Point(x, y) for x, y in zip(xs, ys)]


@st.composite
def queries(draw, m):
    a = draw(st.integers(1, m))
    b = draw(st.integers(a, m))
    return ThreeSidedQuery(a, b, draw(st.integers(1, m)))


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def five():
    return list(FIVE)


# -- acceptance reporting ------------------------------------------------------

ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or not (rep.when == "call" or rep.failed):
        return
    detail = dict(item.user_properties).get("detail", "")
    ACCEPTANCE[mark.args[0]] = (mark.args[1], rep.passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(
            f"{'PASS' if ok else 'FAIL'}  criterion {n:>2}: {title}" + (f"  [{detail}]" if detail else ""))
