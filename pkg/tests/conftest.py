import pytest

from celljump.poly import Polynomial

X1 = Polynomial.var(0)
X2 = Polynomial.var(1)

ACCEPTANCE_LINES = []


@pytest.fixture
def p1():
    """2*x1^2 + 2*x2^2 - 1"""
    return 2 * X1 ** 2 + 2 * X2 ** 2 - 1


@pytest.fixture
def p2():
    """x1^8*x2^3 - 4*x1^6 + 6*x1^4*x2 - 4*x1^2 + x2"""
    return X1 ** 8 * X2 ** 3 - 4 * X1 ** 6 + 6 * X1 ** 4 * X2 - 4 * X1 ** 2 + X2


@pytest.fixture
def ellipses():
    """The two polynomials f1, f2 of the two-ellipse formula, in (x, y)."""
    x, y = X1, X2
    f1 = 17 * x * x + 2 * x * y + 17 * y * y + 48 * x - 48 * y
    f2 = 17 * x * x - 2 * x * y + 17 * y * y - 48 * x - 48 * y
    return f1, f2


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        label = report.nodeid.split("::")[-1]
        status = "PASS" if report.passed else "FAIL"
        ACCEPTANCE_LINES.append(f"{status}  {label}  ({report.duration:.2f}s)")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
