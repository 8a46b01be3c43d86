import math

import numpy as np
import pytest

from magnomech.params import SystemParams

TWO_PI = 2.0 * math.pi
OMEGA_B = TWO_PI * 10e6
OMEGA_A = TWO_PI * 10e9

# drive level of the shipped base configuration (see specs/base.params)
EPS_D = 4.3e4


def make_params(**overrides) -> SystemParams:
    """Operating point shared by most tests; overrides in omega_b units."""
    kwargs = dict(
        omega_b=OMEGA_B,
        omega_a=OMEGA_A,
        delta_a=0.73,
        delta_s=-1.0,
        kappa_a=0.2,
        kappa_m=0.2,
        gamma_b=1e-5,
        g=5e-6,
        lambda_=0.5,
        epsilon_d=EPS_D,
        temperature=0.01,
        omega_c_prime=1.0,
        omega_m=1.8,
    )
    kwargs.update(overrides)
    return SystemParams(**kwargs)


@pytest.fixture
def base_params():
    return make_params()


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_symplectic(rng, n_modes=3, scale=0.4):
    """exp(Omega H) with H symmetric is symplectic for the [[0,1],[-1,0]] form."""
    from scipy.linalg import expm

    from magnomech.fluctuations import symplectic_form

    n = 2 * n_modes
    H = rng.normal(scale=scale, size=(n, n))
    H = 0.5 * (H + H.T)
    return expm(symplectic_form(n_modes) @ H)


def random_physical_cm(rng, n_modes=3, max_thermal=2.0, scale=0.4):
    """S diag(nu) S^T with nu >= 1/2 and S symplectic is a physical CM."""
    S = random_symplectic(rng, n_modes, scale)
    nus = 0.5 + max_thermal * rng.random(n_modes)
    D = np.diag(np.repeat(nus, 2))
    return S @ D @ S.T


def two_mode_squeezed_cm(r):
    """TMSV covariance in (x1, p1, x2, p2) ordering, vacuum variance 1/2."""
    c, s = math.cosh(2 * r), math.sinh(2 * r)
    V = 0.5 * np.array([
        [c, 0.0, s, 0.0],
        [0.0, c, 0.0, -s],
        [s, 0.0, c, 0.0],
        [0.0, -s, 0.0, c],
    ])
    return V
