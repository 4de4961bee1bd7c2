import pytest
from hypothesis import HealthCheck, settings

from rolewicz.maps import counterexample_family, interleaved_family
from rolewicz.operator import OperatorSpec
from rolewicz.scalars import Q

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def ce_fam():
    return counterexample_family()


@pytest.fixture(scope="session")
def parity_fam():
    # n -> 2n, n -> 2n+1
    return interleaved_family(2)


@pytest.fixture(scope="session")
def ce_op(ce_fam):
    return OperatorSpec(ce_fam, (Q(2), Q(2)), Q(17))


# one PASS/FAIL line per acceptance criterion, printed after the run
ACCEPTANCE: dict = {}


def record(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[number])
