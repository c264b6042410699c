import itertools

import pytest
from hypothesis import settings

from geolab.params import NONSPIN, SPIN, FamilyParams

settings.register_profile("fixed", derandomize=True, deadline=None, max_examples=200)
settings.load_profile("fixed")


def census_grid(variant):
    """alpha in {1,2}, beta in {0,1,2}, d in {1,2} (non-spin: {2,3}), p in {5,7,11}."""
    ds = (1, 2) if variant == SPIN else (2, 3)
    out = []
    for a, b, d, p in itertools.product((1, 2), (0, 1, 2), ds, (5, 7, 11)):
        if variant == NONSPIN and not 3 <= 2 * d <= p:
            continue
        out.append(FamilyParams(variant, a, b, d, p))
    return out


@pytest.fixture(scope="session")
def spin_example():
    from geolab.families import build_family

    return build_family(FamilyParams(SPIN, 1, 0, 1, 5))


@pytest.fixture(scope="session")
def nonspin_example():
    from geolab.families import build_family

    return build_family(FamilyParams(NONSPIN, 1, 1, 2, 7))


# -- acceptance summary: one line per criterion -----------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    ok = rep.passed if rep.when == "call" else rep.passed or rep.skipped
    prev = _CRITERIA.get(number, (title, True))
    _CRITERIA[number] = (title, prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {title}")
