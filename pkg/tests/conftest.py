import numpy as np
import pytest

from weberatom import IntegratorConfig, ModelParams, PhaseState, integrate


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(42)


@pytest.fixture(scope="session", autouse=True)
def _warm_integrator():
    # trigger numba compilation once so individual test timings stay honest
    integrate(
        PhaseState(t=0.0, r=1.0, phi=0.0, p_r=0.0, p_phi=1.0),
        ModelParams(alpha=0.0),
        0.01,
        IntegratorConfig(step=1e-3),
    )
