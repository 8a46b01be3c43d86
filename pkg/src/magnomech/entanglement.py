"""Gaussian entanglement measures on 6x6 covariance matrices.

Bipartite logarithmic negativity E_N = max(0, -ln 2 nu_min) from the
minimum symplectic eigenvalue of the partially transposed covariance
matrix; contangle = E_N squared; the minimum residual contangle

    r_min = min over probe r of [ E^2(r|st) - E^2(r|s) - E^2(r|t) ]

certifies genuine tripartite entanglement when positive.  Partial
transposition flips the sign of the momentum (imaginary) quadrature of the
probe mode; E_N of a bipartition does not depend on which side is flipped,
the convention is fixed for determinism.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .fluctuations import _periodic_steady_samples, physicality_check, symplectic_form
from .meanfield import MeanTrajectory
from .params import SystemParams

MODES = ("cavity", "mechanics", "magnon")
PAIRS = (("cavity", "mechanics"), ("cavity", "magnon"), ("mechanics", "magnon"))

NU_FLOOR = 1e-12


def _mode_index(mode) -> int:
    if isinstance(mode, str):
        try:
            return MODES.index(mode)
        except ValueError:
            raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}") from None
    idx = int(mode)
    if not 0 <= idx < len(MODES):
        raise ValueError(f"mode index {idx} out of range")
    return idx


def reduce_cm(V: np.ndarray, modes) -> np.ndarray:
    """Principal submatrix over the retained modes, canonical ordering kept."""
    idx = sorted({_mode_index(m) for m in modes})
    if not idx:
        raise ValueError("at least one mode must be retained")
    cols = np.concatenate([[2 * k, 2 * k + 1] for k in idx])
    return V[np.ix_(cols, cols)]


def partial_transpose(V: np.ndarray, flipped_mode) -> np.ndarray:
    """P V P with P flipping the momentum quadrature of one mode."""
    k = int(flipped_mode) if not isinstance(flipped_mode, str) else _mode_index(flipped_mode)
    n = V.shape[0] // 2
    if not 0 <= k < n:
        raise ValueError(f"flipped mode {k} out of range for {n} modes")
    signs = np.ones(2 * n)
    signs[2 * k + 1] = -1.0
    return V * np.outer(signs, signs)


def symplectic_eigenvalues(V: np.ndarray, sym_tol: float = 1e-9) -> np.ndarray:
    """Moduli of the eigenvalues of i Omega V, one per mode, ascending."""
    V = np.asarray(V, dtype=float)
    n2 = V.shape[0]
    if V.shape != (n2, n2) or n2 % 2:
        raise ValueError(f"covariance matrix must be 2n x 2n, got {V.shape}")
    scale = max(1.0, float(np.linalg.norm(V)))
    if np.linalg.norm(V - V.T) > sym_tol * scale:
        raise ValueError("covariance matrix is not symmetric within tolerance")
    n = n2 // 2
    ev = np.linalg.eigvals(symplectic_form(n) @ V)
    nus = np.sort(np.abs(ev))
    return nus[::2].copy()


def _log_negativity(V: np.ndarray, flip_position: int) -> float:
    nu_min = float(np.min(symplectic_eigenvalues(partial_transpose(V, flip_position))))
    if nu_min < NU_FLOOR:
        warnings.warn(
            f"partially transposed spectrum numerically singular (nu = {nu_min:.3e}); clamped",
            RuntimeWarning,
            stacklevel=3,
        )
        nu_min = NU_FLOOR
    return max(0.0, -math.log(2.0 * nu_min))


def log_negativity_pair(V6: np.ndarray, pair) -> float:
    """E_N between two modes, tracing out the third; transposes the first listed mode."""
    r, s = (_mode_index(m) for m in pair)
    if r == s:
        raise ValueError("pair must name two distinct modes")
    V4 = reduce_cm(V6, (r, s))
    flip_position = 0 if r < s else 1
    return _log_negativity(V4, flip_position)


def log_negativity_1v2(V6: np.ndarray, probe_mode) -> float:
    """E_N of the bipartition probe mode vs the remaining two modes."""
    k = _mode_index(probe_mode)
    return _log_negativity(np.asarray(V6, dtype=float), k)


@dataclass
class EntanglementReport:
    """All bipartite measures and monogamy residuals at one instant."""

    pairwise_logneg: dict
    one_vs_two_logneg: dict
    residuals: dict
    r_min: float
    time: float | None = None
    monogamy_ok: bool = True
    argmin_probes: tuple = ()


@dataclass
class PeriodSummary:
    """Entanglement over one modulation period and its refined maximum."""

    samples: list
    r_max: float
    r_max_time: float
    monogamy_ok: bool


def residual_contangle(V6: np.ndarray, time: float | None = None) -> EntanglementReport:
    """Pairwise/one-vs-two contangles and the minimum residual contangle."""
    V6 = np.asarray(V6, dtype=float)
    pairwise = {pair: log_negativity_pair(V6, pair) for pair in PAIRS}
    one_vs_two = {m: log_negativity_1v2(V6, m) for m in MODES}
    residuals = {}
    for r in MODES:
        others = [m for m in MODES if m != r]
        e_pair = 0.0
        for s in others:
            pair = (r, s) if (r, s) in pairwise else (s, r)
            e_pair += pairwise[pair] ** 2
        residuals[r] = one_vs_two[r] ** 2 - e_pair
    r_min = min(residuals.values())
    argmin = tuple(m for m, v in residuals.items() if v <= r_min + 1e-12)
    return EntanglementReport(
        pairwise_logneg=pairwise,
        one_vs_two_logneg=one_vs_two,
        residuals=residuals,
        r_min=r_min,
        time=time,
        monogamy_ok=all(v >= -1e-9 for v in residuals.values()),
        argmin_probes=argmin,
    )


def max_over_period(
    p: SystemParams,
    orbit: MeanTrajectory | None = None,
    tau: float | None = None,
    n_samples: int = 256,
    refine_rel_tol: float = 1e-4,
    rtol: float = 1e-11,
    mono=None,
    samples=None,
) -> PeriodSummary:
    """Minimum residual contangle sampled over one period, peak refined.

    Coarse sampling of the periodic steady covariance is followed by
    golden-section refinement around the sampled peak until the estimate
    moves by less than ``refine_rel_tol`` relative.  Without parametric
    drives the steady state is constant and a single sample is returned.
    """
    if samples is None:
        if orbit is None and (p.xi_c > 0 or p.xi_m > 0):
            from .meanfield import find_periodic_orbit

            orbit = find_periodic_orbit(p, tau=tau)
        times, Vs, means = _periodic_steady_samples(p, orbit, tau, n_samples, rtol, mono)
    else:
        times, Vs, means = samples
    reports = [residual_contangle(V, time=t) for t, V in zip(times, Vs)]
    monogamy_ok = all(r.monogamy_ok for r in reports)
    if len(times) == 1:
        r = reports[0]
        return PeriodSummary([r], r.r_min, times[0], monogamy_ok)
    phases = reports[:-1]  # last sample repeats the first
    r_values = np.array([r.r_min for r in phases])
    k = int(np.argmax(r_values))
    period = times[-1]
    h = times[1] - times[0]
    t_lo, t_hi = times[k] - h, times[k] + h

    evaluator = _phase_evaluator(p, times, Vs, means, period, rtol)
    t_best, r_best = _golden_refine(evaluator, t_lo, t_hi, float(r_values[k]), times[k], refine_rel_tol)
    return PeriodSummary(phases, r_best, t_best % period, monogamy_ok)


def _phase_evaluator(p, times, Vs, means, period, rtol):
    from .fluctuations import _integrate_mean_cm

    def r_at(t):
        tt = t % period
        j = int(np.searchsorted(times, tt, side="right") - 1)
        j = max(0, min(j, len(times) - 2))
        if abs(tt - times[j]) < 1e-13 * max(period, 1.0):
            return residual_contangle(Vs[j]).r_min
        _, V_end, _ = _integrate_mean_cm(
            p, means[j], Vs[j], times[j], tt, rtol, t_eval=np.array([times[j], tt])
        )
        return residual_contangle(V_end[-1]).r_min

    return r_at


def _golden_refine(f, a, b, f_best, t_best, rel_tol, max_iter=40, min_iter=3):
    """Golden-section maximization of f on [a, b] seeded with the mid sample."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for it in range(max_iter):
        prev_best = f_best
        if fc > f_best:
            f_best, t_best = fc, c
        if fd > f_best:
            f_best, t_best = fd, d
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
        small_change = abs(f_best - prev_best) <= rel_tol * max(abs(f_best), 1e-30)
        if (it + 1 >= min_iter and small_change) or b - a < 1e-10:
            break
    for t, v in ((c, fc), (d, fd)):
        if v > f_best:
            f_best, t_best = v, t
    return t_best, f_best


def physical(V: np.ndarray, tol: float = 1e-9) -> bool:
    """Alias of the fluctuation-side physicality test for convenience."""
    return physicality_check(V, tol)
