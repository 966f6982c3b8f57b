import sys
import warnings
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from twoqubit.dynamics import SecularityWarning  # noqa: E402
from twoqubit.model import SystemParams  # noqa: E402


@pytest.fixture
def preset():
    return SystemParams.preset()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_params(rng, temperatures=True, **overrides):
    """Parameters drawn from omega in [1, 10], lambda in [0.1, 50], T in [0, 40] mK."""
    w1, w2 = rng.uniform(1, 10, size=2)
    lam = rng.uniform(0.1, 50) * rng.choice([-1.0, 1.0])
    a1, a2 = rng.uniform(1e-4, 5e-3, size=2)
    t1, t2 = rng.uniform(0, 40, size=2) if temperatures else (0.0, 0.0)
    kw = dict(omega1=w1, omega2=w2, coupling=lam, alpha1=a1, alpha2=a2, t1_mk=t1, t2_mk=t2)
    kw.update(overrides)
    return SystemParams(**kw)


@pytest.fixture(autouse=True)
def _quiet_secular():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SecularityWarning)
        yield


ACCEPTANCE = []  # one "PASS/FAIL" line per acceptance criterion, filled by test_acceptance


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
