import pytest
from hypothesis import settings

from lineschemes import fixtures, ncalg
from lineschemes.linescheme import M_VARS, line_scheme_system
from lineschemes.multipoly import VarSet
from lineschemes.scalars import standard_tower

settings.register_profile("repo", max_examples=100, derandomize=True, deadline=None)
settings.load_profile("repo")

X_VARS = VarSet(("x1", "x2", "x3", "x4"))


@pytest.fixture(scope="session")
def alg():
    return ncalg.load_presentation(fixtures.data_path(fixtures.A_ALPHA))


@pytest.fixture(scope="session")
def commutative_alg():
    return ncalg.load_presentation(fixtures.data_path(fixtures.POLYNOMIAL_RING))


@pytest.fixture(scope="session")
def dual(alg):
    return ncalg.koszul_dual(alg)


@pytest.fixture(scope="session")
def system(alg, dual):
    return line_scheme_system(alg, dual)


@pytest.fixture(scope="session")
def point_golden():
    return fixtures.load_poly_list(fixtures.data_path(fixtures.POINT_GOLDEN), X_VARS)[1]


@pytest.fixture(scope="session")
def line_golden():
    return fixtures.load_poly_list(fixtures.data_path(fixtures.LINE_GOLDEN), M_VARS)[1]


@pytest.fixture(scope="session")
def tower():
    return standard_tower()


# acceptance criteria: tests marked ``criterion(n, title)`` are grouped and
# reported as one PASS/FAIL line per criterion at the end of the run

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion this test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, {"title": title, "passed": True, "tests": 0, "seconds": 0.0})
    if report.when in ("setup", "call"):
        entry["seconds"] += report.duration
    entry["tests"] += report.when == "call"
    if report.failed or (report.skipped and report.when != "teardown"):
        entry["passed"] = False


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        e = _CRITERIA[number]
        status = "PASS" if e["passed"] else "FAIL"
        terminalreporter.write_line(
            f"{status} criterion {number}: {e['title']} ({e['tests']} tests, {e['seconds']:.1f}s)"
        )
