import sys

import numpy as np
import pytest
from hypothesis import settings

from spps_ist.direct import log_spaced_rho, run_direct
from spps_ist.potentials import PotentialSpec

settings.register_profile("repo", deadline=None, derandomize=True, max_examples=60)
settings.load_profile("repo")

# moderate settings for unit tests; the acceptance module uses reference-grade ones
FAST_NPU = 300


@pytest.fixture(scope="session")
def soliton_spec():
    return PotentialSpec.soliton(0.5, np.pi / 2, 0.1, 0.1)


@pytest.fixture(scope="session")
def soliton_direct(soliton_spec):
    """Ex. 2 direct transform with the x = 0 and a few extra columns kept."""
    return run_direct(soliton_spec, N=60, nodes_per_unit=FAST_NPU, rho=log_spaced_rho(1000))


@pytest.fixture(scope="session")
def soliton_direct_full(soliton_spec):
    """Ex. 2 direct transform on the default 5000-point rho grid."""
    return run_direct(soliton_spec, N=60, nodes_per_unit=FAST_NPU)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
