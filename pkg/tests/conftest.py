import sys
import numpy as np
import pytest
from hypothesis import settings, strategies as st

from cprtax import presets

settings.register_profile("default", max_examples=25, deadline=None)
settings.load_profile("default")


@st.composite
def games(draw, max_players=4):
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return presets.random_game(np.random.default_rng(seed), max_players=max_players)


@pytest.fixture(scope="session")
def congestion():
    return presets.congestion()


@pytest.fixture(scope="session")
def neutral():
    return presets.network_neutral()


@pytest.fixture(scope="session")
def gain_seeking():
    return presets.network_gain_seeking(2)


@pytest.fixture(scope="session")
def mixed():
    return presets.network_mixed()


@pytest.fixture(scope="session")
def trio():
    return presets.fragility_trio()


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
