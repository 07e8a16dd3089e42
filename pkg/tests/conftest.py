import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from syzygy.ff import make_field  # noqa: E402
from syzygy.linalg import available_backends  # noqa: E402

P = 2147483647
P2 = 2147483629


@pytest.fixture
def ctx():
    return make_field(P)


@pytest.fixture(params=available_backends())
def backend(request):
    return request.param


ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    """Record one acceptance criterion; the summary prints one line per entry."""

    def record(name: str, ok: bool, detail: str = "") -> bool:
        ACCEPTANCE.append((name, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())
