import os
from contextlib import contextmanager

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=40, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.register_profile("thorough", deadline=None, max_examples=400,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_CRITERIA = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_CRITERIA] = {}


@pytest.fixture
def criterion(request):
    """Context manager recording one acceptance criterion as PASS or FAIL."""
    log = request.config.stash[_CRITERIA]

    @contextmanager
    def check(number: int, title: str):
        try:
            yield
        except BaseException:
            log[number] = f"criterion {number:2d}: FAIL  {title}"
            print(log[number])
            raise
        log[number] = f"criterion {number:2d}: PASS  {title}"
        print(log[number])

    return check


def pytest_terminal_summary(terminalreporter, config):
    log = config.stash.get(_CRITERIA, {})
    if log:
        terminalreporter.write_sep("=", "acceptance criteria")
        for n in sorted(log):
            terminalreporter.write_line(log[n])
