import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=500, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_REPORT: list[str] = []


@pytest.fixture
def report():
    """Record the single pass/fail line of an acceptance criterion."""

    def emit(criterion: int, ok: bool, detail: str) -> None:
        line = f"[criterion {criterion}] {'PASS' if ok else 'FAIL'}: {detail}"
        print(line)
        _REPORT.append(line)

    return emit


def pytest_terminal_summary(terminalreporter):
    if _REPORT:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_REPORT, key=lambda s: int(s.split()[1].rstrip("]"))):
            terminalreporter.write_line(line)
