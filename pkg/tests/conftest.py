import pytest

from mitsui_lab.config import reference_field

# (criterion number, title, passed, detail) rows collected by the acceptance tests
ACCEPTANCE = []


def record(number, title, passed, detail=""):
    ACCEPTANCE.append((number, title, bool(passed), detail))
    print(f"criterion {number:2d} {'PASS' if passed else 'FAIL'}: {title} {detail}")
    return bool(passed)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} {number:2d} {title}: {detail}")


@pytest.fixture(scope="session")
def QQ():
    return reference_field("Q")


@pytest.fixture(scope="session")
def Qi():
    return reference_field("Q(i)")


@pytest.fixture(scope="session")
def Qs2():
    return reference_field("Q(sqrt2)")
