from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from paramproc import pi as P
from paramproc.correspondence import ExhaustiveDepth, RandomShape, generate_corpus

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

NAMES = ("a", "b", "c")


@pytest.fixture(scope="session")
def depth2():
    return generate_corpus(0, ExhaustiveDepth(2))


@pytest.fixture(scope="session")
def random3():
    return generate_corpus(0, RandomShape(200, 3))


def pi_terms(max_leaves: int = 6):
    """Closed pi processes over ``NAMES``; binders reuse names so that
    shadowing and capture cases come up often."""

    def extend(children):
        bound = st.sampled_from(("x", "y", "a", "b", "d"))
        name = st.sampled_from(NAMES + ("x", "y", "d"))
        return st.one_of(
            st.builds(P.PIn, name, bound, children),
            st.builds(P.POut, name, name, children),
            st.builds(P.PRes, bound, children),
            st.builds(P.PPar, children, children),
            st.builds(P.PRep, name, bound, children),
        )

    # open terms are closed up by restricting their stray names
    raw = st.recursive(st.just(P.NIL), extend, max_leaves=max_leaves)
    return raw.map(lambda p: P.res(sorted(P.free_names(p) - set(NAMES)), p))


# -- acceptance report ---------------------------------------------------------------

_criteria: dict[int, tuple[str, str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or not (rep.when == "call" or rep.failed):
        return
    number, title = mark.args
    detail = "; ".join(f"{k}={v}" for k, v in item.user_properties)
    _criteria[number] = ("PASS" if rep.passed else "FAIL", title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        status, title, detail = _criteria[number]
        terminalreporter.write_line(f"{status} {number} {title}" + (f" ({detail})" if detail else ""))
