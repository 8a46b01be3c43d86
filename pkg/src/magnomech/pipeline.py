"""Per-configuration evaluation: mean field -> fluctuations -> entanglement.

One grid point of a sweep (or one CLI invocation) flows through here.  The
autonomous case (both parametric drives off) takes the algebraic route:
static fixed point, Hurwitz test, continuous Lyapunov solve.  Driven cases
locate the mean-field limit cycle, build the monodromy map, gate on the
Floquet criterion, and evaluate the entanglement measures over one period.
Instantaneous (Hurwitz) stability sampled along the orbit is reported
alongside as data; the Floquet test decides whether values exist.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import entanglement, fluctuations, meanfield
from .params import CommensurabilityError, ParameterError, SystemParams, common_period

NAN = float("nan")

VALUE_COLUMNS = ("r_max", "en_ab", "en_am", "en_bm", "max_abs_a")


@dataclass
class PointResult:
    """Outcome of evaluating one parameter configuration."""

    params: SystemParams
    status: str = "ok"
    tau: float | None = None
    rh_stable: bool | None = None
    floquet_stable: bool | None = None
    floquet_radius: float | None = None
    physical: bool | None = None
    monogamy_ok: bool | None = None
    r_max: float = NAN
    r_max_time: float = NAN
    en_ab: float = NAN
    en_am: float = NAN
    en_bm: float = NAN
    max_abs_a: float = NAN
    reports: list = field(default_factory=list, repr=False)
    wall_time: float = 0.0

    @property
    def values(self) -> dict:
        return {name: getattr(self, name) for name in VALUE_COLUMNS}


def _static_point(p: SystemParams, result: PointResult) -> PointResult:
    fp = meanfield.find_fixed_point(p)
    A = fluctuations.drift_matrix(0.0, fp, p)
    result.rh_stable = fluctuations.stability_instantaneous(A)
    result.floquet_stable = result.rh_stable
    result.max_abs_a = abs(fp.a)
    if not result.rh_stable:
        result.status = "unstable"
        return result
    V = fluctuations.steady_cm_autonomous(A, fluctuations.diffusion_matrix(p))
    result.physical = fluctuations.physicality_check(V)
    report = entanglement.residual_contangle(V, time=0.0)
    result.reports = [report]
    result.monogamy_ok = report.monogamy_ok
    result.r_max = report.r_min
    result.r_max_time = 0.0
    result.en_ab = report.pairwise_logneg[("cavity", "mechanics")]
    result.en_am = report.pairwise_logneg[("cavity", "magnon")]
    result.en_bm = report.pairwise_logneg[("mechanics", "magnon")]
    return result


def _driven_point(p: SystemParams, result: PointResult, samples_per_period: int) -> PointResult:
    tau = common_period(p.omega_c_prime, p.omega_m, p.xi_c, p.xi_m)
    result.tau = tau
    orbit = meanfield.find_periodic_orbit(p, tau=tau, require_stable=False)
    result.max_abs_a = meanfield.orbit_max_abs_a(orbit)
    mono = fluctuations.monodromy(p, orbit, tau)
    result.floquet_radius = mono.spectral_radius
    result.floquet_stable = fluctuations.stability_floquet(mono)
    result.rh_stable = all(
        fluctuations.stability_instantaneous(fluctuations.drift_matrix(t, s, p))
        for t, s in zip(orbit.times, orbit.states)
    )
    if not result.floquet_stable:
        result.status = "unstable"
        return result
    samples = fluctuations._periodic_steady_samples(
        p, orbit, tau, samples_per_period, mono=mono
    )
    result.physical = all(fluctuations.physicality_check(V) for V in samples[1])
    summary = entanglement.max_over_period(p, orbit, tau, samples=samples)
    result.reports = summary.samples
    result.monogamy_ok = summary.monogamy_ok
    result.r_max = summary.r_max
    result.r_max_time = summary.r_max_time
    for attr, pair in (
        ("en_ab", ("cavity", "mechanics")),
        ("en_am", ("cavity", "magnon")),
        ("en_bm", ("mechanics", "magnon")),
    ):
        setattr(result, attr, max(r.pairwise_logneg[pair] for r in summary.samples))
    return result


def evaluate_point(p: SystemParams, samples_per_period: int = 256) -> PointResult:
    """Evaluate one configuration; never raises, failures land in ``status``."""
    result = PointResult(params=p)
    start = time.perf_counter()
    try:
        if p.xi_c == 0 and p.xi_m == 0:
            result = _static_point(p, result)
        else:
            result = _driven_point(p, result, samples_per_period)
    except meanfield.OrbitInstabilityError as err:
        result.status = "unstable"
        result.floquet_stable = False
        result.floquet_radius = err.radius
    except fluctuations.InstabilityError:
        result.status = "unstable"
        result.floquet_stable = False
    except (
        ParameterError,
        CommensurabilityError,
        meanfield.IntegrationError,
        meanfield.LimitCycleError,
        meanfield.RootFindError,
        np.linalg.LinAlgError,
    ) as err:
        result.status = f"error:{type(err).__name__}: {err}"
    result.wall_time = time.perf_counter() - start
    if result.status != "ok":
        # no fabricated numbers at unstable/failed points
        for name in VALUE_COLUMNS:
            setattr(result, name, NAN)
        result.r_max_time = NAN
        result.physical = None
        result.monogamy_ok = None
    return result
