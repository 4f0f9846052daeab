from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from pascal_chase.chase import Drop, Lift, ShiftRight, SwapSym, WeightedConfig
from pascal_chase.exact import Weight

settings.register_profile(
    "default", max_examples=200, deadline=None,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

NAMES = ("a", "b", "c")

small_rationals = st.builds(
    Fraction, st.integers(-20, 20), st.integers(1, 6))


@st.composite
def monomials(draw):
    names = draw(st.lists(st.sampled_from(NAMES), max_size=2, unique=True))
    return tuple(sorted((n, draw(st.integers(1, 3))) for n in names))


@st.composite
def weights(draw, symbolic=True):
    if not symbolic:
        return Weight.const(draw(small_rationals))
    terms = draw(st.dictionaries(monomials(), small_rationals, max_size=4))
    return Weight(terms)


@st.composite
def cells(draw, max_row=20):
    n = draw(st.integers(0, max_row))
    return n, draw(st.integers(0, n))


@st.composite
def configs(draw, max_row=20, symbolic=True):
    items = draw(st.lists(st.tuples(cells(max_row), weights(symbolic)), max_size=8))
    return WeightedConfig(items)


@st.composite
def steps(draw, max_row=20):
    kind = draw(st.sampled_from(("lift", "drop", "shift", "swap")))
    if kind == "swap":
        n, k = draw(cells(max_row))
        return SwapSym(n, k)
    w = draw(weights())
    if kind == "lift":
        n = draw(st.integers(1, max_row))
        return Lift(n, draw(st.integers(-1, n + 1)), w)
    n = draw(st.integers(0, max_row))
    k = draw(st.integers(-1, n + 1))
    return Drop(n, k, w) if kind == "drop" else ShiftRight(n, k, w)


@pytest.fixture
def a():
    return Weight.var("a")


@pytest.fixture
def b():
    return Weight.var("b")


# -- acceptance summary ------------------------------------------------------------------

_CRITERIA: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call" and report.passed:
        return
    number, title = marker.args
    detail = dict(item.user_properties).get("detail", "")
    if report.failed:
        _CRITERIA[number] = ("FAIL", title, report.longrepr.reprcrash.message
                             if hasattr(report.longrepr, "reprcrash") else "failed")
    elif report.when == "call":
        _CRITERIA[number] = ("PASS", title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, title, detail = _CRITERIA[number]
        suffix = f" ({detail})" if detail else ""
        terminalreporter.write_line(f"[{status}] criterion {number}: {title}{suffix}")
