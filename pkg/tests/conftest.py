import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from coherent_frames import gabor_rep, make_system

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# criterion number -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE = {}


@pytest.fixture
def gabor2():
    return gabor_rep(2)


@pytest.fixture
def tight2(gabor2):
    """Gabor N=2, g=e0, full group: S = 2I."""
    return make_system(gabor2, [1, 0])


@pytest.fixture
def onb2(gabor2):
    """Gabor N=2, g=e0, lam = {(0,0), (1,0)}: the standard basis."""
    return make_system(gabor2, [1, 0], [0, 1])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
