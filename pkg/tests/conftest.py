import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ckdv import GridSpec, make_hirota_satsuma, make_majda_biello  # noqa: E402
from ckdv.profiles import initial_profile  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def mb1():
    return make_majda_biello(1.0)


@pytest.fixture
def hs():
    return make_hirota_satsuma(0.1, 1.0)


@pytest.fixture
def small_grid():
    return GridSpec(256, 16 * np.pi)


@pytest.fixture
def small_state(small_grid):
    """Small sech2 pair, v wider and shifted."""
    return initial_profile("sech2", {"amplitude_u": 0.1, "amplitude_v": 0.1}, small_grid)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
