import pytest

from qsubspace import Dataset

# two-class 1D learning set of the worked example
C1 = [-2.24697, -1.17115, -0.882941, -1.9828]
C2 = [0.836746, 1.70144, 3.05605, -0.0344292]


@pytest.fixture
def example_1d():
    return Dataset.from_classes({"1": C1, "2": C2})


@pytest.fixture
def two_point_2d():
    """One class of two 2D points, one near (0, 0) and one near (1, 1)."""
    return [[0.1, -0.2], [0.9, 1.2]]


_CRITERIA = []


@pytest.fixture
def criterion():
    """Record one acceptance check: ``criterion(name, ok, detail)`` asserts ``ok``."""

    def check(name, ok, detail=""):
        _CRITERIA.append((name, bool(ok), detail))
        print(f"[{'PASS' if ok else 'FAIL'}] {name} {detail}")
        assert ok, f"{name}: {detail}"

    return check


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _CRITERIA:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
