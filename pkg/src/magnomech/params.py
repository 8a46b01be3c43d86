"""Physical parameters, unit conventions and derived quantities.

All dynamical rates and frequencies are stored scaled by the mechanical
frequency omega_b (omega_b == 1 internally, time in units of 1/omega_b).
Absolute frequencies in rad/s are carried separately; they are needed only
for thermal occupations and for converting an input laser power into a
drive amplitude.  hbar and k_B live here and nowhere else.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from fractions import Fraction

from scipy.constants import hbar as HBAR, k as KB

TWO_PI = 2.0 * math.pi


class ParameterError(ValueError):
    """Invalid or inconsistent parameter values."""


class CommensurabilityError(ParameterError):
    """The two modulation frequencies share no usable common period."""


# fields stored in units of omega_b
SCALED_FIELDS = (
    "delta_a", "delta_s", "kappa_a", "kappa_m", "gamma_b",
    "g", "lambda_", "xi_c", "xi_m", "omega_c_prime", "omega_m", "epsilon_d",
)
# fields that may be overridden point-by-point in sweeps
TUNABLE_FIELDS = SCALED_FIELDS + ("theta_c", "theta_m", "temperature")


@dataclass(frozen=True)
class SystemParams:
    """One configuration of the driven cavity/mechanics/magnon system.

    Scaled fields (units of omega_b): detunings delta_a = omega_a - omega_d
    and delta_s = omega_s - omega_d, decay rates kappa_a / kappa_m / gamma_b,
    couplings g (optomechanical) and lambda_ (photon-magnon), parametric
    amplitudes xi_c / xi_m with modulation frequencies omega_c_prime
    (optical, = omega_c - 2 omega_d) and omega_m (mechanical), and the
    coherent drive amplitude epsilon_d.  theta_c / theta_m are the
    parametric phases in rad, temperature is in kelvin.

    omega_b is the mechanical frequency in rad/s and anchors the unit
    system; omega_a / omega_s / omega_d / omega_c are optional absolute
    frequencies in rad/s, used for thermal occupations and consistency
    checks only.
    """

    omega_b: float
    delta_a: float
    delta_s: float
    kappa_a: float
    kappa_m: float
    gamma_b: float
    g: float = 0.0
    lambda_: float = 0.0
    xi_c: float = 0.0
    xi_m: float = 0.0
    omega_c_prime: float = 0.0
    omega_m: float = 0.0
    theta_c: float = 0.0
    theta_m: float = 0.0
    epsilon_d: float = 0.0
    temperature: float = 0.0
    omega_a: float | None = None
    omega_s: float | None = None
    omega_d: float | None = None
    omega_c: float | None = None

    def __post_init__(self):
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            if not math.isfinite(v):
                raise ParameterError(f"{f.name} must be finite, got {v!r}")
        if self.omega_b <= 0:
            raise ParameterError("omega_b must be positive")
        for name in ("kappa_a", "kappa_m", "gamma_b"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"decay rate {name} must be positive")
        for name in ("xi_c", "xi_m"):
            if getattr(self, name) < 0:
                raise ParameterError(f"parametric amplitude {name} must be >= 0")
        if self.temperature < 0:
            raise ParameterError("temperature must be >= 0")
        self._check_frequency_consistency()

    def _check_frequency_consistency(self):
        """Detunings must agree with any absolute frequencies supplied."""
        implied_d = []
        if self.omega_d is not None:
            implied_d.append(("omega_d", self.omega_d))
        if self.omega_a is not None:
            implied_d.append(("omega_a - delta_a", self.omega_a - self.delta_a * self.omega_b))
        if self.omega_s is not None:
            implied_d.append(("omega_s - delta_s", self.omega_s - self.delta_s * self.omega_b))
        for (na, va), (nb, vb) in zip(implied_d, implied_d[1:]):
            if abs(va - vb) > 1e-6 * max(abs(va), abs(vb), self.omega_b):
                raise ParameterError(
                    f"inconsistent drive frequency: {na} = {va:.6e} but {nb} = {vb:.6e}"
                )
        if self.omega_c is not None and implied_d:
            wc_implied = 2.0 * implied_d[0][1] + self.omega_c_prime * self.omega_b
            if abs(self.omega_c - wc_implied) > 1e-6 * max(abs(self.omega_c), self.omega_b):
                raise ParameterError(
                    f"omega_c = {self.omega_c:.6e} inconsistent with "
                    f"2*omega_d + omega_c_prime = {wc_implied:.6e}"
                )

    @property
    def delta_theta(self) -> float:
        """Phase difference theta_c - theta_m between the two modulations."""
        return self.theta_c - self.theta_m

    @classmethod
    def from_si(cls, omega_b: float, **rates_si) -> "SystemParams":
        """Build from rates/frequencies given in rad/s instead of omega_b units."""
        kwargs = {}
        for key, value in rates_si.items():
            if key in SCALED_FIELDS:
                kwargs[key] = value / omega_b
            else:
                kwargs[key] = value
        return cls(omega_b=omega_b, **kwargs)

    def drive_omega_d(self) -> float:
        """Absolute drive frequency in rad/s, explicit or implied by omega_a."""
        if self.omega_d is not None:
            return self.omega_d
        if self.omega_a is not None:
            return self.omega_a - self.delta_a * self.omega_b
        raise ParameterError("drive frequency requires omega_d or omega_a")

    def magnon_omega_s(self) -> float:
        """Absolute magnon frequency in rad/s, explicit or implied."""
        if self.omega_s is not None:
            return self.omega_s
        return self.drive_omega_d() + self.delta_s * self.omega_b


def retuned(p: SystemParams, **changes) -> SystemParams:
    """Copy ``p`` with scaled-field overrides, re-deriving absolute frequencies.

    Changing a detuning means retuning the drive (and the magnon bias field),
    so omega_d / omega_s / omega_c are recomputed from omega_a rather than
    kept stale.  Only fields in TUNABLE_FIELDS may be overridden.
    """
    unknown = set(changes) - set(TUNABLE_FIELDS)
    if unknown:
        raise ParameterError(f"cannot override non-tunable field(s): {sorted(unknown)}")
    fields = {f.name: getattr(p, f.name) for f in dataclasses.fields(p)}
    fields.update(changes)
    if fields["omega_a"] is not None:
        omega_d = fields["omega_a"] - fields["delta_a"] * fields["omega_b"]
        if fields["omega_d"] is not None:
            fields["omega_d"] = omega_d
        if fields["omega_s"] is not None:
            fields["omega_s"] = omega_d + fields["delta_s"] * fields["omega_b"]
        if fields["omega_c"] is not None:
            fields["omega_c"] = 2.0 * omega_d + fields["omega_c_prime"] * fields["omega_b"]
    return SystemParams(**fields)


@dataclass(frozen=True)
class ThermalOccupations:
    """Mean thermal quanta of the three baths."""

    n_a: float
    n_b: float
    n_s: float

    def __post_init__(self):
        for name in ("n_a", "n_b", "n_s"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ParameterError(f"occupation {name} must be finite and >= 0")


@dataclass(frozen=True)
class ModeAmplitudes:
    """Complex mean values <a>, <b>, <m> at one instant."""

    a: complex
    b: complex
    m: complex

    def __post_init__(self):
        for name in ("a", "b", "m"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ParameterError(f"mean value {name} must be finite")

    def as_array(self):
        import numpy as np

        return np.array([self.a, self.b, self.m], dtype=complex)

    @classmethod
    def from_array(cls, arr) -> "ModeAmplitudes":
        return cls(a=complex(arr[0]), b=complex(arr[1]), m=complex(arr[2]))


def thermal_occupation(omega: float, temperature: float) -> float:
    """Bose occupation 1/(exp(hbar*omega/kB*T) - 1); 0 at T = 0.

    omega in rad/s, temperature in kelvin.
    """
    if omega <= 0:
        raise ParameterError(f"frequency must be positive, got {omega!r}")
    if temperature < 0:
        raise ParameterError("temperature must be >= 0")
    if temperature == 0:
        return 0.0
    x = HBAR * omega / (KB * temperature)
    if x > 700.0:  # exp overflow; occupation < 1e-304
        return 0.0
    return 1.0 / math.expm1(x)


def thermal_occupations(p: SystemParams) -> ThermalOccupations:
    """Occupations of the cavity, mechanical and magnon baths for ``p``.

    Requires absolute cavity/magnon frequencies when T > 0; at T = 0 all
    occupations vanish without them.
    """
    if p.temperature == 0:
        return ThermalOccupations(0.0, 0.0, 0.0)
    if p.omega_a is None:
        raise ParameterError("thermal occupations at T > 0 require omega_a")
    return ThermalOccupations(
        n_a=thermal_occupation(p.omega_a, p.temperature),
        n_b=thermal_occupation(p.omega_b, p.temperature),
        n_s=thermal_occupation(p.magnon_omega_s(), p.temperature),
    )


def drive_amplitude_from_power(power: float, kappa_a: float, omega_d: float) -> float:
    """Drive amplitude sqrt(2*kappa_a*P/(hbar*omega_d)) in rad/s.

    power in watts, kappa_a and omega_d in rad/s.
    """
    if power < 0:
        raise ParameterError("power must be >= 0")
    if kappa_a <= 0 or omega_d <= 0:
        raise ParameterError("kappa_a and omega_d must be positive")
    return math.sqrt(2.0 * kappa_a * power / (HBAR * omega_d))


def common_period(
    omega_c_prime: float,
    omega_m: float,
    xi_c: float,
    xi_m: float,
    max_denominator: int = 64,
    rel_tol: float = 1e-9,
) -> float:
    """Least common period of the active parametric modulations (scaled time).

    With a single drive active this is 2*pi over its frequency; with both,
    the frequency ratio must be rational (denominator <= max_denominator to
    relative accuracy rel_tol) and the least common multiple of the two
    periods is returned.  Raises if no drive is active (autonomous system)
    or the frequencies are incommensurate.
    """
    opa, mpa = xi_c > 0, xi_m > 0
    if not opa and not mpa:
        raise ParameterError("no parametric drive active: system is autonomous")
    if opa and omega_c_prime <= 0:
        raise ParameterError("omega_c_prime must be positive while xi_c > 0")
    if mpa and omega_m <= 0:
        raise ParameterError("omega_m must be positive while xi_m > 0")
    if opa and not mpa:
        return TWO_PI / omega_c_prime
    if mpa and not opa:
        return TWO_PI / omega_m
    ratio = omega_m / omega_c_prime
    frac = Fraction(ratio).limit_denominator(max_denominator)
    if frac.numerator == 0 or abs(float(frac) - ratio) > rel_tol * ratio:
        raise CommensurabilityError(
            f"omega_m/omega_c_prime = {ratio!r} has no rational approximation "
            f"p/q with q <= {max_denominator} within {rel_tol:g} relative"
        )
    return TWO_PI * frac.denominator / omega_c_prime
