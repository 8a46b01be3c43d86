"""Classical mean-value dynamics: transients, fixed points, periodic orbits.

The three complex mean values evolve under

    d<a>/dt = -(kappa_a + i delta_a)<a> + i g <a>(<b>* + <b>) - i lambda <m>
              + 2 xi_c <a>* exp(-i(omega_c' t - theta_c)) + epsilon_d
    d<b>/dt = -(gamma_b + i)<b> + 2 xi_m <b>* exp(-i(omega_m t - theta_m))
              + i g |<a>|^2
    d<m>/dt = -(kappa_m + i delta_s)<m> - i lambda <a>

in omega_b-scaled units (omega_b == 1, time in 1/omega_b).  Under parametric
modulation the attractor is a limit cycle with the common modulation period;
it is located by Newton shooting on the period map, using the variational
(monodromy) matrix for the Jacobian.  The first-order sideband expansion of
the cavity amplitude under optical modulation alone is also provided.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .params import ModeAmplitudes, ParameterError, SystemParams, common_period

TWO_PI = 2.0 * math.pi


class IntegrationError(RuntimeError):
    """The ODE integrator failed; carries the failure time."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class _BlowupError(FloatingPointError):
    """Internal: state left the physically meaningful range mid-integration."""

    def __init__(self, t):
        super().__init__(f"state overflow at t = {t:.6g}")
        self.t = t


_STATE_BOUND = 1e15


class RootFindError(RuntimeError):
    """Fixed-point search did not converge; carries the last residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class LimitCycleError(RuntimeError):
    """Periodic-orbit search did not converge."""


class OrbitInstabilityError(LimitCycleError):
    """A periodic orbit was found but its multipliers leave the unit disk."""

    def __init__(self, message, radius=None):
        super().__init__(message)
        self.radius = radius


class SingularityError(RuntimeError):
    """A sideband-response denominator degenerated (resonant pole)."""


@dataclass
class MeanTrajectory:
    """Sampled mean-field trajectory; one period when ``period`` is set.

    ``states`` has shape (n, 3), columns <a>, <b>, <m>.
    """

    times: np.ndarray
    states: np.ndarray
    period: float | None = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states, dtype=complex)
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("trajectory times must be strictly increasing")

    @property
    def initial(self) -> ModeAmplitudes:
        return ModeAmplitudes.from_array(self.states[0])

    def amplitudes(self, i: int) -> ModeAmplitudes:
        return ModeAmplitudes.from_array(self.states[i])

    @property
    def abs_a(self) -> np.ndarray:
        return np.abs(self.states[:, 0])


def meanfield_rhs(t: float, state, p: SystemParams) -> np.ndarray:
    """Time derivative of (<a>, <b>, <m>) at time ``t`` (scaled units)."""
    if isinstance(state, ModeAmplitudes):
        a, b, m = state.a, state.b, state.m
    else:
        a, b, m = complex(state[0]), complex(state[1]), complex(state[2])
    pump_c = 2.0 * p.xi_c * cmath.exp(-1j * (p.omega_c_prime * t - p.theta_c)) if p.xi_c else 0.0
    pump_m = 2.0 * p.xi_m * cmath.exp(-1j * (p.omega_m * t - p.theta_m)) if p.xi_m else 0.0
    da = (
        -(p.kappa_a + 1j * p.delta_a) * a
        + 1j * p.g * a * (b.conjugate() + b)
        - 1j * p.lambda_ * m
        + pump_c * a.conjugate()
        + p.epsilon_d
    )
    db = -(p.gamma_b + 1j) * b + pump_m * b.conjugate() + 1j * p.g * (a.real**2 + a.imag**2)
    dm = -(p.kappa_m + 1j * p.delta_s) * m - 1j * p.lambda_ * a
    return np.array([da, db, dm])


# real <-> complex packing; layout (Re a, Im a, Re b, Im b, Re m, Im m)
def pack_state(state_c) -> np.ndarray:
    state_c = np.asarray(state_c, dtype=complex)
    out = np.empty(6)
    out[0::2] = state_c.real
    out[1::2] = state_c.imag
    return out


def unpack_state(y) -> np.ndarray:
    return np.asarray(y[0::2]) + 1j * np.asarray(y[1::2])


def _rhs_real(t, y, p):
    if abs(y[0]) > _STATE_BOUND or abs(y[2]) > _STATE_BOUND or abs(y[4]) > _STATE_BOUND:
        raise _BlowupError(t)
    d = meanfield_rhs(t, unpack_state(y[:6]), p)
    return pack_state(d)


def _solve(fun, y0, t0, t1, rtol, atol, t_eval=None, method="DOP853"):
    try:
        sol = solve_ivp(
            fun, (t0, t1), y0, method=method, rtol=rtol, atol=atol,
            t_eval=t_eval, dense_output=False,
        )
    except _BlowupError as err:
        raise IntegrationError(str(err), time=err.t) from None
    if not sol.success:
        raise IntegrationError(
            f"integration failed at t = {sol.t[-1]:.6g}: {sol.message}", time=sol.t[-1]
        )
    return sol


def default_atol(p: SystemParams, rtol: float) -> float:
    return rtol * max(abs(p.epsilon_d), 1.0)


def integrate_meanfield(
    p: SystemParams,
    t_span,
    initial,
    rtol: float = 1e-9,
    atol: float | None = None,
    n_samples: int = 512,
    t_eval=None,
    method: str = "DOP853",
) -> MeanTrajectory:
    """Integrate the mean-field equations over ``t_span`` from ``initial``."""
    if rtol <= 0:
        raise ParameterError("rtol must be positive")
    t0, t1 = float(t_span[0]), float(t_span[-1])
    if atol is None:
        atol = default_atol(p, rtol)
    if t_eval is None:
        t_eval = np.linspace(t0, t1, n_samples + 1)
    if isinstance(initial, ModeAmplitudes):
        initial = initial.as_array()
    y0 = pack_state(initial)
    sol = _solve(lambda t, y: _rhs_real(t, y, p), y0, t0, t1, rtol, atol, t_eval=t_eval)
    return MeanTrajectory(times=sol.t, states=unpack_state(sol.y).T, period=None)


def _no_parametric(p: SystemParams) -> SystemParams:
    if p.xi_c == 0 and p.xi_m == 0:
        return p
    from .params import retuned

    return retuned(p, xi_c=0.0, xi_m=0.0)


def find_fixed_point(p: SystemParams) -> ModeAmplitudes:
    """Static root of the mean-field equations with parametric drives ignored.

    Eliminating <b> and <m> leaves one real unknown, the mechanical
    back-action detuning shift s = g(<b> + <b>*), which satisfies the cubic

        s^3 - 2 M s^2 + (K^2 + M^2) s - C = 0

    with K = kappa_a + Re L, M = delta_a + Im L, L = lambda^2/(kappa_m +
    i delta_s) and C = 2 g^2 epsilon_d^2 / (1 + gamma_b^2).  The smallest
    positive real root is the branch continuously connected to the undriven
    state; the response is multivalued (bistable) when three real roots
    exist, and on fold collapse only the strong-shift branch remains.
    """
    if p.epsilon_d == 0:
        return ModeAmplitudes(0j, 0j, 0j)
    den_m = p.kappa_m + 1j * p.delta_s
    magnon_pull = p.lambda_**2 / den_m
    den_b = p.gamma_b + 1j
    K = p.kappa_a + magnon_pull.real
    M = p.delta_a + magnon_pull.imag
    C = 2.0 * p.g**2 * p.epsilon_d**2 / (1.0 + p.gamma_b**2)
    if C == 0:
        s = 0.0
    else:
        roots = np.roots([1.0, -2.0 * M, K * K + M * M, -C])
        real = roots[np.abs(roots.imag) <= 1e-9 * np.max(np.abs(roots))].real
        candidates = real[real > 0]
        if candidates.size == 0:
            raise RootFindError(
                f"no physical back-action root among {roots}", residual=None
            )
        s = float(np.min(candidates))
        # one Newton polish step in exact arithmetic of the cubic
        f = ((s - 2.0 * M) * s + K * K + M * M) * s - C
        df = (3.0 * s - 4.0 * M) * s + K * K + M * M
        if df != 0:
            s -= f / df
    a = -p.epsilon_d / (1j * s - p.kappa_a - 1j * p.delta_a - magnon_pull)
    b = 1j * p.g * (a.real**2 + a.imag**2) / den_b
    m = -1j * p.lambda_ * a / den_m
    fp = ModeAmplitudes(a, b, m)
    res = np.linalg.norm(meanfield_rhs(0.0, fp, _no_parametric(p)))
    if res > 1e-10 * (abs(p.epsilon_d) + 1.0):
        raise RootFindError(
            f"fixed-point residual {res:.3e} exceeds tolerance", residual=res
        )
    return fp


def _mean_phi_rhs(t, y, p):
    """Joint RHS for the mean field and its 6x6 variational matrix."""
    from .fluctuations import drift_matrix

    dy = np.empty(42)
    dy[:6] = _rhs_real(t, y[:6], p)
    A = drift_matrix(t, unpack_state(y[:6]), p)
    dy[6:] = (A @ y[6:].reshape(6, 6)).ravel()
    return dy


def _propagate_with_variational(p, y0, tau, rtol, atol_mean):
    y = np.empty(42)
    y[:6] = y0
    y[6:] = np.eye(6).ravel()
    atol = np.full(42, 1e-12)
    atol[:6] = atol_mean
    sol = _solve(lambda t, y: _mean_phi_rhs(t, y, p), y, 0.0, tau, rtol, atol)
    yT = sol.y[:, -1]
    return yT[:6], yT[6:].reshape(6, 6)


def find_periodic_orbit(
    p: SystemParams,
    tau: float | None = None,
    tol: float = 1e-8,
    n_samples: int = 512,
    rtol: float = 1e-11,
    max_newton: int = 30,
    require_stable: bool = True,
) -> MeanTrajectory:
    """One period of the asymptotic limit cycle under parametric modulation.

    Newton shooting on the six-real-dimensional period map, seeded at the
    static fixed point; the variational matrix integrated along the orbit
    supplies the exact Jacobian and, after convergence, the Floquet
    multipliers.  Convergence: ||x(tau) - x(0)|| <= tol * max(||x||, 1).
    With both parametric drives off the orbit degenerates to the fixed
    point (an explicit ``tau`` is then required).
    """
    if tau is None:
        tau = common_period(p.omega_c_prime, p.omega_m, p.xi_c, p.xi_m)
    fp = find_fixed_point(p)
    if p.xi_c == 0 and p.xi_m == 0:
        times = np.linspace(0.0, tau, n_samples + 1)
        states = np.tile(fp.as_array(), (len(times), 1))
        return MeanTrajectory(times=times, states=states, period=tau)

    atol_mean = default_atol(p, rtol)
    scale = max(1.0, float(np.linalg.norm(pack_state(fp.as_array()))))
    x = pack_state(fp.as_array())
    best_norm = math.inf
    converged = False
    for _ in range(max_newton):
        try:
            xT, phi = _propagate_with_variational(p, x, tau, rtol, atol_mean)
        except IntegrationError as err:
            raise LimitCycleError(f"orbit search left the integrable region: {err}") from err
        F = xT - x
        fnorm = float(np.linalg.norm(F))
        if fnorm <= tol * scale:
            converged = True
            break
        step, *_ = np.linalg.lstsq(phi - np.eye(6), -F, rcond=None)
        # keep iterates in the basin: cap the step, backtrack while it hurts
        step_norm = float(np.linalg.norm(step))
        if step_norm > 0.5 * scale:
            step *= 0.5 * scale / step_norm
        lam = 1.0
        for _ in range(8):
            try:
                xT_try = _propagate_mean(p, x + lam * step, tau, rtol, atol_mean)
                f_try = float(np.linalg.norm(xT_try - (x + lam * step)))
            except IntegrationError:
                f_try = math.inf
            if f_try < fnorm or lam < 1e-3:
                break
            lam *= 0.5
        x = x + lam * step
        best_norm = min(best_norm, fnorm)
    if not converged:
        # an expanding period map cannot be relaxed into; report instability
        radius = float(np.max(np.abs(np.linalg.eigvals(phi))))
        if radius > 1.0 + 1e-9:
            raise OrbitInstabilityError(
                f"period map expands (multiplier radius {radius:.6g}); "
                f"no attracting orbit (last residual {best_norm:.3e})",
                radius=radius,
            )
        x, ok = _orbit_by_relaxation(p, x, tau, tol * scale, rtol, atol_mean)
        if not ok:
            raise LimitCycleError(
                f"periodic orbit not converged; last period-map residual {best_norm:.3e}"
            )
        _, phi = _propagate_with_variational(p, x, tau, rtol, atol_mean)
    radius = float(np.max(np.abs(np.linalg.eigvals(phi))))
    if require_stable and radius > 1.0 + 1e-9:
        raise OrbitInstabilityError(
            f"periodic orbit is unstable (multiplier radius {radius:.6g})", radius=radius
        )
    times = np.linspace(0.0, tau, n_samples + 1)
    sol = _solve(lambda t, y: _rhs_real(t, y, p), x, 0.0, tau, rtol, atol_mean, t_eval=times)
    return MeanTrajectory(times=times, states=unpack_state(sol.y).T, period=tau)


def _propagate_mean(p, y0, tau, rtol, atol):
    sol = _solve(lambda t, y: _rhs_real(t, y, p), y0, 0.0, tau, rtol, atol)
    return sol.y[:, -1]


def _orbit_by_relaxation(p, x, tau, tol_abs, rtol, atol, max_periods=512):
    """Fallback: iterate the period map until it stops moving.

    Aborts early when the iteration grows for many consecutive periods
    (divergence) instead of burning the full budget.
    """
    prev_move = math.inf
    growing = 0
    for _ in range(max_periods):
        x_next = _propagate_mean(p, x, tau, rtol, atol)
        move = float(np.linalg.norm(x_next - x))
        if move <= tol_abs:
            return x_next, True
        growing = growing + 1 if move > prev_move else 0
        if growing > 20 or not math.isfinite(move):
            return x_next, False
        prev_move = move
        x = x_next
    return x, False


def orbit_state_at(p: SystemParams, orbit: MeanTrajectory, t: float, rtol: float = 1e-11):
    """Mean state at arbitrary time, re-integrated from the nearest earlier sample."""
    if orbit.period is not None:
        t = math.fmod(t, orbit.period)
        if t < 0:
            t += orbit.period
    k = int(np.searchsorted(orbit.times, t, side="right") - 1)
    k = max(0, min(k, len(orbit.times) - 1))
    t0, y0 = orbit.times[k], pack_state(orbit.states[k])
    if t == t0:
        return orbit.states[k].copy()
    sol = _solve(lambda tt, y: _rhs_real(tt, y, p), y0, t0, t, rtol, default_atol(p, rtol))
    return unpack_state(sol.y[:, -1])


def orbit_max_abs_a(orbit: MeanTrajectory) -> float:
    """Peak |<a>| over the sampled orbit, parabola-refined at the maximum."""
    mag = orbit.abs_a
    k = int(np.argmax(mag))
    if k == 0 or k == len(mag) - 1:
        if orbit.period is None:
            return float(mag[k])
        # wrap around the period (first and last samples coincide)
        prev = mag[-2] if k == 0 else mag[1]
        nxt = mag[1] if k == 0 else mag[-2]
    else:
        prev, nxt = mag[k - 1], mag[k + 1]
    denom = prev - 2.0 * mag[k] + nxt
    if denom >= 0:
        return float(mag[k])
    delta = 0.5 * (prev - nxt) / denom
    return float(mag[k] - 0.25 * (prev - nxt) * delta)


@dataclass
class FourierCoefficients:
    """First-order sideband expansion of the cavity mean value.

    <a>(t) = a0 + eps_s e^{-i w t} a_plus + eps_s* e^{+i w t} a_minus with
    w = omega_c_prime and eps_s = 2 xi_c epsilon_d the effective sideband
    drive.  Valid for optical modulation alone and small xi_c.
    """

    a0: complex
    b0: complex
    m0: complex
    a_plus: complex
    a_minus: complex
    epsilon_s: complex


def analytic_coefficients(p: SystemParams, tol_singular: float = 1e-10) -> FourierCoefficients:
    """Zeroth- and first-order coefficients of the modulated cavity amplitude.

    Harmonic balance of the mean-field equations to first order in the
    sideband drive eps_s = 2 xi_c epsilon_d: the +/- sideband amplitudes
    solve a 2x2 linear system whose coefficients involve the detuned
    response denominators of all three modes at +/- omega_c_prime.
    """
    if p.xi_m != 0:
        raise ParameterError("sideband expansion assumes xi_m = 0")
    fp = find_fixed_point(p)
    a0, b0, m0 = fp.a, fp.b, fp.m
    eps_s = 2.0 * p.xi_c * p.epsilon_d
    if p.xi_c == 0:
        return FourierCoefficients(a0, b0, m0, 0j, 0j, complex(eps_s))

    w = p.omega_c_prime
    dA = p.kappa_a + 1j * p.delta_a - 1j * w
    dB = p.gamma_b + 1j - 1j * w
    dC = p.kappa_m + 1j * p.delta_s - 1j * w
    dD = p.kappa_a + 1j * p.delta_a + 1j * w
    dE = p.gamma_b + 1j + 1j * w
    dF = p.kappa_m + 1j * p.delta_s + 1j * w
    for name, den in (("A", dA), ("B", dB), ("C", dC), ("D", dD), ("E", dE), ("F", dF)):
        if abs(den) < tol_singular:
            raise SingularityError(
                f"sideband denominator {name} degenerates (|{name}| = {abs(den):.3e})"
            )

    g2 = p.g**2
    n0 = abs(a0) ** 2
    shift = 1j * p.g * (b0 + b0.conjugate())
    mech = 1.0 / dB - 1.0 / dE.conjugate()
    B1 = dA - shift + g2 * n0 * mech + p.lambda_**2 / dC
    B2 = dD - shift + g2 * n0 * (1.0 / dE - 1.0 / dB.conjugate()) + p.lambda_**2 / dF
    C1 = -g2 * a0**2 * mech
    C2 = -g2 * a0**2 * (1.0 / dE - 1.0 / dB.conjugate())
    drive = a0.conjugate() * cmath.exp(1j * p.theta_c) / p.epsilon_d
    # B1 a+ = C1 a-* + drive;  B2 a- = C2 a+*
    a_plus = drive / (B1 - C1 * C2.conjugate() / B2.conjugate())
    a_minus = C2 * a_plus.conjugate() / B2
    return FourierCoefficients(a0, b0, m0, a_plus, a_minus, complex(eps_s))


def analytic_cavity_amplitude(t, c: FourierCoefficients, omega_c_prime: float):
    """Cavity mean value of the first-order sideband expansion at time(s) ``t``."""
    t = np.asarray(t, dtype=float)
    out = (
        c.a0
        + c.epsilon_s * np.exp(-1j * omega_c_prime * t) * c.a_plus
        + np.conj(c.epsilon_s) * np.exp(1j * omega_c_prime * t) * c.a_minus
    )
    return out if out.ndim else complex(out)
