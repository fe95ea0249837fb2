import importlib

import pytest
from hypothesis import HealthCheck, settings

from fsstsp import _pykernels

settings.register_profile("default", deadline=None, max_examples=100,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

BACKENDS = [_pykernels]
try:
    BACKENDS.append(importlib.import_module("fsstsp._ckernels"))
except ImportError:
    pass

_CRITERIA: dict[str, tuple[bool, str]] = {}


@pytest.fixture(params=BACKENDS, ids=lambda k: k.NAME)
def kernels(request):
    return request.param


@pytest.fixture
def criterion():
    """Record one acceptance verdict; printed as PASS/FAIL at the end of the session."""
    def record(cid: str, passed: bool, detail: str = "") -> None:
        _CRITERIA[cid] = (passed, detail)
        print(f"{'PASS' if passed else 'FAIL'} criterion {cid}: {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_CRITERIA):
        passed, detail = _CRITERIA[cid]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} criterion {cid}: {detail}")
