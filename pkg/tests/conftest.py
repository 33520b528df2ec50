import numpy as np
import pytest
from hypothesis import settings

from optorf.cavity import CavityParams, SpinEnsembleParams
from optorf.core import angular

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# fitted resonator and spin values of the reference experiment
KAPPA_T = angular(8.57e6)
KAPPA_C = angular(4.52e6)
GAMMA_SPIN = angular(219.14e6)
GAMMA_OPT = angular(755e6)
C_MU = 0.135
G_FACTOR = 8.20
OMEGA_C = angular(12.29e9)


@pytest.fixture
def cavity():
    return CavityParams(OMEGA_C, KAPPA_C, KAPPA_T)


@pytest.fixture
def spins():
    return SpinEnsembleParams(G_FACTOR, GAMMA_SPIN, C_MU)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
