import numpy as np
import pytest

from pairpulse import ModelParams, Pulse, derive_modes, integrate_mode

# Reference parameter point used throughout: omega0 = 3, lam = 3/8,
# attractive pulse Lambda = 2/9 at beta = 3.
OMEGA0 = 3.0
LAM = 0.375
LAMBDA = 2.0 / 9.0
BETA = 3.0


@pytest.fixture(scope="session")
def modes_ref():
    return derive_modes(ModelParams(OMEGA0, LAM))


@pytest.fixture(scope="session")
def pulse_ref():
    return Pulse(Lambda=LAMBDA, beta=BETA, omega0=OMEGA0)


@pytest.fixture(scope="session")
def traj_pair_ref(modes_ref, pulse_ref):
    """Both mode trajectories at tight tolerance, shared across tests."""
    t1 = integrate_mode(modes_ref.omega1, pulse_ref, rtol=1e-11, atol=1e-13)
    t2 = integrate_mode(modes_ref.omega2, pulse_ref, rtol=1e-11, atol=1e-13)
    return t1, t2


@pytest.fixture(scope="session")
def x_grid_ref(modes_ref):
    half = 8.0 / np.sqrt(modes_ref.omega_d)
    return np.linspace(-half, half, 256)
