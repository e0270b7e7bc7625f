import pytest

from rankone.space import RankOneSpace, make_space

# H^3, CH^2, HH^2 and the octonionic plane
PRESET_KEYS = [(2, 0), (2, 1), (4, 3), (8, 7)]
PRESETS = [make_space(s) for s in ("real:3", "complex:2", "quaternionic:2", "octonionic")]


@pytest.fixture
def h3():
    return RankOneSpace(2, 0)


@pytest.fixture
def ch2():
    return RankOneSpace(2, 1)


@pytest.fixture(params=PRESETS, ids=lambda s: f"{s.m_gamma}-{s.m_2gamma}")
def preset(request):
    return request.param


# --- acceptance reporting ----------------------------------------------------------

SESSION = {"start": None, "lines": []}


def pytest_sessionstart(session):
    import time
    SESSION["start"] = time.perf_counter()


def pytest_collection_modifyitems(session, config, items):
    # the suite-runtime criterion has to observe everything else first
    last = [it for it in items if it.name == "test_criterion_10_suite_runtime"]
    rest = [it for it in items if it.name != "test_criterion_10_suite_runtime"]
    items[:] = rest + last


def pytest_terminal_summary(terminalreporter):
    if SESSION["lines"]:
        terminalreporter.section("acceptance criteria")
        for line in SESSION["lines"]:
            terminalreporter.write_line(line)


@pytest.fixture
def criterion():
    """Record and print one PASS/FAIL line, then assert."""
    def report(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {label}: {detail}"
        SESSION["lines"].append(line)
        print(line)
        assert ok, line
    return report
