import random

import pytest

from cubecolor.counting import Coloring, coloring_tuples, enumerate_colorings
from cubecolor.cube import Cube
from cubecolor.phases import MAIN, classify, fstar_census

_criteria: dict[int, tuple[str, list[str]]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marks = getattr(report, "_criterion", None)
    if marks is None:
        return
    n, title = marks
    _criteria.setdefault(n, (title, []))[1].append(report.outcome)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep._criterion = m.args


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, outcomes = _criteria[n]
        ok = outcomes and all(o == "passed" for o in outcomes)
        terminalreporter.write_line("criterion %2d: %s  %s" % (n, "PASS" if ok else "FAIL", title))


@pytest.fixture(scope="session")
def cubes():
    return {d: Cube(d) for d in range(1, 6)}


@pytest.fixture(scope="session")
def colorings_d2():
    return list(enumerate_colorings(Cube(2), 4))


@pytest.fixture(scope="session")
def colorings_d3():
    return list(enumerate_colorings(Cube(3), 4))


@pytest.fixture(scope="session")
def fstar_d3():
    return fstar_census(Cube(3))


def sample_d4(draws: int, seed: int = 2026, fstar_only: bool = True):
    """Colorings of Q_4 built by stacking two Q_3 colorings that differ everywhere.

    Every proper coloring of Q_4 arises this way from exactly one pair, so
    accepted draws are uniform.  Keeps F* members, or with ``fstar_only``
    off, every flawed coloring whose main phase is 12|34.
    """
    c3, c4 = Cube(3), Cube(4)
    halves = coloring_tuples(c3, 4)
    rng = random.Random(seed)
    out = []
    for _ in range(draws):
        a, b = rng.choice(halves), rng.choice(halves)
        if any(x == y for x, y in zip(a, b)):
            continue
        f = Coloring(a + b, 4, c4)
        rep = classify(f)
        if rep.in_fstar if fstar_only else (rep.phase == MAIN and rep.flaws):
            out.append(f)
    return out


@pytest.fixture(scope="session")
def fstar_d4_sample():
    return sample_d4(60_000)


@pytest.fixture(scope="session")
def relaxed_d4_sample():
    return sample_d4(60_000, seed=7, fstar_only=False)
