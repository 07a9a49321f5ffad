import numpy as np
import pytest

from eit_rfm import BoundaryParams, DiskGeometry
from eit_rfm.cli import PRESETS

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record_criterion():
    """Collect one PASS/FAIL line per acceptance criterion for the terminal summary."""

    def record(number: int, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)


@pytest.fixture(params=sorted(PRESETS))
def preset(request):
    return request.param, PRESETS[request.param]


def preset_operator_inputs(cfg):
    return BoundaryParams(cfg.gamma, cfg.mu), DiskGeometry(cfg.rho)


def nodes(m):
    return 2 * np.pi * np.arange(m) / m
