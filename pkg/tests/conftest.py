import json
import pathlib

import numpy as np
import pytest

FROZEN = pathlib.Path(__file__).parent / "oracles" / "frozen.json"

_ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def frozen():
    return json.loads(FROZEN.read_text())


@pytest.fixture
def report():
    """Record one summary line; printed after the run."""
    return _ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def gaussian_standard(x, t, sigma=1.0, center=0.0):
    """Closed-form free Gaussian under exp(-i p^2 t)."""
    s2 = sigma ** 2 + 1j * t
    return ((2 * np.pi * sigma ** 2) ** -0.25 * np.sqrt(sigma ** 2 / s2)
            * np.exp(-((x - center) ** 2) / (4 * s2)))
