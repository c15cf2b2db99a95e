import itertools

import pytest

from randpart import _fallback

try:
    from randpart import _core
except ImportError:  # extension not built
    _core = None

KERNELS = [pytest.param(_fallback, id="python")]
if _core is not None:
    KERNELS.append(pytest.param(_core, id="cython"))


@pytest.fixture(params=KERNELS)
def kernel(request):
    return request.param


def brute_partitions(n):
    """All set partitions of range(n) as frozensets of frozensets, by
    collapsing every labelling in [0, n)^n. Independent of the package."""
    seen = set()
    for labels in itertools.product(range(n), repeat=n):
        blocks = {}
        for i, lab in enumerate(labels):
            blocks.setdefault(lab, set()).add(i)
        seen.add(frozenset(frozenset(b) for b in blocks.values()))
    return seen


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one acceptance verdict line; printed live and again in the summary."""

    def emit(number: int, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
