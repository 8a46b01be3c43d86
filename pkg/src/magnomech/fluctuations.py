"""Linearized quadrature fluctuations: drift/diffusion matrices, covariance
dynamics, periodic steady state and stability tests.

Quadrature ordering is fixed throughout the codebase as

    (A_r, A_i, B_r, B_i, M_r, M_i)

with X_r = (o + o^dag)/sqrt(2), X_i = i(o^dag - o)/sqrt(2) and vacuum
variance 1/2.  The covariance matrix obeys dV/dt = A(t) V + V A(t)^T + D.
V is propagated in upper-triangle coordinates so symmetry is exact by
construction.  On a modulation period tau the update is affine,
V -> Phi V Phi^T + Q; when the monodromy matrix Phi is contracting, the
periodic initial condition solves the discrete Lyapunov (Stein) equation
V0 = Phi V0 Phi^T + Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigvals, eigvalsh, solve_continuous_lyapunov

from .meanfield import (
    IntegrationError,
    MeanTrajectory,
    _rhs_real,
    _solve,
    default_atol,
    find_fixed_point,
    pack_state,
    unpack_state,
)
from .params import (
    ModeAmplitudes,
    SystemParams,
    ThermalOccupations,
    thermal_occupations,
)

ORDERING = ("a_r", "a_i", "b_r", "b_i", "m_r", "m_i")
VACUUM_VARIANCE = 0.5
N_MODES = 3

_TRIU = np.triu_indices(6)


class InstabilityError(RuntimeError):
    """No periodic steady state exists (monodromy spectral radius >= 1)."""


class DivergenceError(IntegrationError):
    """Covariance propagation blew up (unstable regime)."""


def symplectic_form(n_modes: int = N_MODES) -> np.ndarray:
    """Block-diagonal symplectic form, [[0, 1], [-1, 0]] per mode."""
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        omega[2 * k, 2 * k + 1] = 1.0
        omega[2 * k + 1, 2 * k] = -1.0
    return omega


def vech(M: np.ndarray) -> np.ndarray:
    """Upper triangle of a symmetric 6x6 matrix as a 21-vector."""
    return M[_TRIU]


def unvech(v) -> np.ndarray:
    M = np.zeros((6, 6))
    M[_TRIU] = v
    M.T[_TRIU] = v
    return M


def drift_matrix(t: float, mean, p: SystemParams) -> np.ndarray:
    """Drift matrix A(t) of the linearized dynamics at mean state ``mean``.

    The mean-field-dependent entries are the complex enhanced coupling
    G = g<a> and the shifted detuning Delta = delta_a - g(<b> + <b>*);
    the parametric drives enter through
    zeta = 2 xi cos(w t - theta), Lambda = 2 xi sin(w t - theta).
    This matrix is also the Jacobian of the nonlinear mean-field flow.
    """
    if isinstance(mean, ModeAmplitudes):
        a, b = mean.a, mean.b
    else:
        a, b = complex(mean[0]), complex(mean[1])
    G = p.g * a
    gr, gi = G.real, G.imag
    delta = p.delta_a - 2.0 * p.g * b.real
    ph_c = p.omega_c_prime * t - p.theta_c
    ph_m = p.omega_m * t - p.theta_m
    zc = 2.0 * p.xi_c * math.cos(ph_c)
    lc = 2.0 * p.xi_c * math.sin(ph_c)
    zm = 2.0 * p.xi_m * math.cos(ph_m)
    lm = 2.0 * p.xi_m * math.sin(ph_m)
    ka, km, gb, lam, ds = p.kappa_a, p.kappa_m, p.gamma_b, p.lambda_, p.delta_s
    return np.array([
        [-ka + zc, delta - lc, -2.0 * gi, 0.0, 0.0, lam],
        [-delta - lc, -ka - zc, 2.0 * gr, 0.0, -lam, 0.0],
        [0.0, 0.0, -gb + zm, 1.0 - lm, 0.0, 0.0],
        [2.0 * gr, 2.0 * gi, -1.0 - lm, -gb - zm, 0.0, 0.0],
        [0.0, lam, 0.0, 0.0, -km, ds],
        [-lam, 0.0, 0.0, 0.0, -ds, -km],
    ])


def diffusion_matrix(p: SystemParams, occ: ThermalOccupations | None = None) -> np.ndarray:
    """Diagonal noise-injection matrix set by decay rates and occupations."""
    if occ is None:
        occ = thermal_occupations(p)
    return np.diag([
        p.kappa_a * (2.0 * occ.n_a + 1.0),
        p.kappa_a * (2.0 * occ.n_a + 1.0),
        p.gamma_b * (2.0 * occ.n_b + 1.0),
        p.gamma_b * (2.0 * occ.n_b + 1.0),
        p.kappa_m * (2.0 * occ.n_s + 1.0),
        p.kappa_m * (2.0 * occ.n_s + 1.0),
    ])


def cm_rhs(V: np.ndarray, A: np.ndarray, D: np.ndarray) -> np.ndarray:
    """Covariance equation of motion, A V + V A^T + D."""
    return A @ V + V @ A.T + D


def thermal_diagonal(p: SystemParams, occ: ThermalOccupations | None = None) -> np.ndarray:
    """Uncoupled-bath steady covariance diag((2n+1)/2) per quadrature."""
    if occ is None:
        occ = thermal_occupations(p)
    return np.diag([
        occ.n_a + 0.5, occ.n_a + 0.5,
        occ.n_b + 0.5, occ.n_b + 0.5,
        occ.n_s + 0.5, occ.n_s + 0.5,
    ])


@dataclass
class Monodromy:
    """Fundamental matrix and accumulated noise over one modulation period."""

    phi: np.ndarray
    q: np.ndarray
    tau: float

    @property
    def spectral_radius(self) -> float:
        return float(np.max(np.abs(eigvals(self.phi))))


def monodromy(
    p: SystemParams,
    orbit: MeanTrajectory,
    tau: float | None = None,
    rtol: float = 1e-11,
) -> Monodromy:
    """Integrate Phi' = A Phi from identity and Q' = A Q + Q A^T + D from zero
    over one period, carrying the mean field along the orbit exactly."""
    if tau is None:
        tau = orbit.period
    if tau is None:
        raise ValueError("monodromy needs a period")
    D = diffusion_matrix(p)

    def rhs(t, y):
        dy = np.empty(6 + 36 + 21)
        dy[:6] = _rhs_real(t, y[:6], p)
        A = drift_matrix(t, unpack_state(y[:6]), p)
        dy[6:42] = (A @ y[6:42].reshape(6, 6)).ravel()
        Q = unvech(y[42:])
        dy[42:] = vech(A @ Q + Q @ A.T + D)
        return dy

    y0 = np.concatenate([pack_state(orbit.states[0]), np.eye(6).ravel(), np.zeros(21)])
    atol = np.empty(63)
    atol[:6] = default_atol(p, rtol)
    atol[6:42] = rtol
    atol[42:] = rtol * max(1.0, float(np.max(np.diag(D))) * tau)
    sol = _solve(rhs, y0, 0.0, tau, rtol, atol)
    yT = sol.y[:, -1]
    q = unvech(yT[42:])
    return Monodromy(phi=yT[6:42].reshape(6, 6), q=q, tau=tau)


def solve_stein(phi: np.ndarray, q: np.ndarray, tol: float = 1e-12, max_iter: int = 200) -> np.ndarray:
    """Solve V = Phi V Phi^T + Q by doubling; requires spectral radius < 1."""
    V = q.copy()
    F = phi.copy()
    for _ in range(max_iter):
        increment = F @ V @ F.T
        V_new = V + increment
        F = F @ F
        scale = np.linalg.norm(V_new)
        if not np.isfinite(scale):
            break
        if np.linalg.norm(increment) <= tol * max(scale, 1e-300):
            return 0.5 * (V_new + V_new.T)
        V = V_new
    raise InstabilityError("Stein iteration did not contract; spectral radius >= 1?")


def integrate_cm(
    p: SystemParams,
    orbit: MeanTrajectory,
    V0: np.ndarray,
    t_span,
    rtol: float = 1e-10,
    n_samples: int = 256,
    t_eval=None,
):
    """Propagate the covariance matrix over ``t_span`` along the mean orbit.

    Returns (times, V_samples) with V_samples of shape (n, 6, 6).  The mean
    field is integrated jointly so the drift matrix is evaluated on the
    exact orbit (periodic extension when the orbit has a period).
    """
    from .meanfield import orbit_state_at

    t0, t1 = float(t_span[0]), float(t_span[-1])
    mean0 = orbit_state_at(p, orbit, t0)
    if t_eval is None:
        t_eval = np.linspace(t0, t1, n_samples + 1)
    times, Vs, _ = _integrate_mean_cm(p, mean0, V0, t0, t1, rtol, t_eval)
    return times, Vs


def _integrate_mean_cm(p, mean0, V0, t0, t1, rtol, t_eval):
    D = diffusion_matrix(p)

    def rhs(t, y):
        dy = np.empty(27)
        dy[:6] = _rhs_real(t, y[:6], p)
        A = drift_matrix(t, unpack_state(y[:6]), p)
        V = unvech(y[6:])
        dy[6:] = vech(A @ V + V @ A.T + D)
        return dy

    y0 = np.concatenate([pack_state(mean0), vech(np.asarray(V0, dtype=float))])
    atol = np.empty(27)
    atol[:6] = default_atol(p, rtol)
    atol[6:] = rtol * max(1.0, float(np.max(np.abs(V0))), float(np.max(np.diag(D))))
    try:
        sol = _solve(rhs, y0, t0, t1, rtol, atol, t_eval=t_eval)
    except IntegrationError as err:
        raise DivergenceError(
            f"covariance propagation diverged near t = {err.time}", time=err.time
        ) from err
    if not np.all(np.isfinite(sol.y)):
        raise DivergenceError("covariance propagation produced non-finite values")
    times = sol.t
    Vs = np.stack([unvech(sol.y[6:, k]) for k in range(sol.y.shape[1])])
    means = unpack_state(sol.y[:6]).T
    return times, Vs, means


def periodic_steady_cm(
    p: SystemParams,
    orbit: MeanTrajectory | None,
    tau: float | None,
    n_samples: int = 256,
    rtol: float = 1e-11,
    mono: Monodromy | None = None,
):
    """Periodic steady-state covariance, sampled over one period.

    Solves the Stein equation for the periodic initial condition and then
    integrates one period; returns (times, V_samples) with n_samples + 1
    entries whose first and last agree to integration accuracy.  With both
    parametric drives off this reduces to the algebraic Lyapunov steady
    state (a single sample when ``tau`` is None).
    """
    times, Vs, _means = _periodic_steady_samples(p, orbit, tau, n_samples, rtol, mono)
    return times, Vs


def _periodic_steady_samples(p, orbit, tau, n_samples, rtol=1e-11, mono=None):
    if p.xi_c == 0 and p.xi_m == 0:
        fp = find_fixed_point(p)
        A = drift_matrix(0.0, fp, p)
        if not stability_instantaneous(A):
            raise InstabilityError("no steady state: drift matrix is not Hurwitz")
        V = steady_cm_autonomous(A, diffusion_matrix(p))
        if tau is None:
            return np.array([0.0]), V[np.newaxis], fp.as_array()[np.newaxis]
        times = np.linspace(0.0, tau, n_samples + 1)
        return times, np.tile(V, (len(times), 1, 1)), np.tile(fp.as_array(), (len(times), 1))
    if orbit is None:
        raise ValueError("periodic steady state needs the mean orbit")
    if tau is None:
        tau = orbit.period
    if mono is None:
        mono = monodromy(p, orbit, tau, rtol=rtol)
    rho = mono.spectral_radius
    if rho >= 1.0 - 1e-9:
        raise InstabilityError(f"no periodic steady state: spectral radius {rho:.6g}")
    V0 = solve_stein(mono.phi, mono.q)
    t_eval = np.linspace(0.0, tau, n_samples + 1)
    return _integrate_mean_cm(p, orbit.states[0], V0, 0.0, tau, rtol, t_eval)


def steady_cm_autonomous(A: np.ndarray, D: np.ndarray) -> np.ndarray:
    """Algebraic steady state of A V + V A^T + D = 0 for constant drift."""
    V = solve_continuous_lyapunov(A, -D)
    return 0.5 * (V + V.T)


def stability_instantaneous(A: np.ndarray) -> bool:
    """Hurwitz test: every eigenvalue of the drift matrix in the left half-plane."""
    return bool(np.max(eigvals(A).real) < 0.0)


def floquet_radius(m) -> float:
    phi = m.phi if isinstance(m, Monodromy) else np.asarray(m)
    return float(np.max(np.abs(eigvals(phi))))


def stability_floquet(m, margin: float = 1e-9) -> bool:
    """Periodic-system stability: all multipliers strictly inside the unit disk."""
    return floquet_radius(m) < 1.0 - margin


def physicality_check(V: np.ndarray, tol: float = 1e-9) -> bool:
    """Heisenberg consistency of a covariance matrix: V + (i/2) Omega >= 0."""
    V = np.asarray(V)
    n_modes = V.shape[0] // 2
    H = V + 0.5j * symplectic_form(n_modes)
    return bool(np.min(eigvalsh(H)) >= -tol)
