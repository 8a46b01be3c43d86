"""Simulation of a parametrically driven hybrid cavity-magnon optomechanical system.

Computes classical periodic orbits of the mean field, the periodic steady
state of the quadrature covariance matrix, and tripartite entanglement
measures (logarithmic negativities and the minimum residual contangle),
with a sweep engine and CLI on top.
"""

__version__ = "0.1.0"

from .params import (
    CommensurabilityError,
    ModeAmplitudes,
    ParameterError,
    SystemParams,
    ThermalOccupations,
    common_period,
    drive_amplitude_from_power,
    retuned,
    thermal_occupation,
    thermal_occupations,
)

__all__ = [
    "CommensurabilityError",
    "ModeAmplitudes",
    "ParameterError",
    "SystemParams",
    "ThermalOccupations",
    "common_period",
    "drive_amplitude_from_power",
    "retuned",
    "thermal_occupation",
    "thermal_occupations",
    "__version__",
]
