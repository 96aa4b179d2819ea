"""Model parameters, probe grids and their validation.

Units: hbar = 1, every rate, detuning and coupling is a frequency in GHz and
times are in ns.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .exceptions import ParameterError

__all__ = [
    "ModelParams",
    "ProbeGrid",
    "GroupIndexScale",
    "ValidationReport",
    "REFERENCE_PARAMS",
    "validate_params",
    "params_from_dict",
    "params_from_json",
    "majorana_splitting",
]


@dataclass(frozen=True)
class ModelParams:
    """Rates and detunings of the pumped quantum dot coupled to a Majorana pair.

    Attributes
    ----------
    delta_c : exciton-pump detuning, omega_e - omega_c
    delta_m : Majorana-pump detuning, omega_M - omega_c
    beta1, beta2 : dot-Majorana couplings
    gamma1 : exciton relaxation rate
    gamma2 : exciton dephasing rate
    kappa_m : Majorana mode decay rate
    omega_c_rabi_sq : squared pump Rabi frequency (GHz^2)
    """

    delta_c: float = 0.0
    delta_m: float = 0.0
    beta1: float = 0.05
    beta2: float = 0.05
    gamma1: float = 0.3
    gamma2: float = 0.15
    kappa_m: float = 1e-4
    omega_c_rabi_sq: float = 0.005

    @property
    def omega_c(self) -> float:
        """Pump Rabi frequency (the square root of ``omega_c_rabi_sq``)."""
        return math.sqrt(self.omega_c_rabi_sq)

    @property
    def coupling(self) -> complex:
        """beta1 + i beta2."""
        return complex(self.beta1, self.beta2)

    def replace(self, **changes: float) -> "ModelParams":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict[str, float]:
        return dataclasses.asdict(self)

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in dataclasses.fields(cls))


# Gamma1 = 0.3 GHz, Gamma2 = 0.15 GHz, kappa_M = 0.1 MHz, beta1 = beta2 = 0.05 GHz,
# pump Rabi frequency squared 0.005 GHz^2, both detunings zero.
REFERENCE_PARAMS = ModelParams()


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def raise_if_invalid(self) -> None:
        if self.violations:
            raise ParameterError("; ".join(self.violations))


def validate_params(p: ModelParams) -> ValidationReport:
    """Check every invariant of ``p`` and report the violated ones by field name."""
    violations = []
    for name in ModelParams.field_names():
        value = getattr(p, name)
        if isinstance(value, bool) or not isinstance(value, (int, float, np.floating, np.integer)):
            violations.append(f"{name} must be a real number")
        elif not math.isfinite(value):
            violations.append(f"{name} must be finite")
    if violations:
        return ValidationReport(tuple(violations))
    for name in ("gamma1", "gamma2", "kappa_m"):
        if not getattr(p, name) > 0:
            violations.append(f"{name} must be > 0")
    for name in ("omega_c_rabi_sq", "beta1", "beta2"):
        if not getattr(p, name) >= 0:
            violations.append(f"{name} must be ≥ 0")
    return ValidationReport(tuple(violations))


def params_from_dict(data: Mapping[str, Any], base: ModelParams | None = None) -> ModelParams:
    """Build parameters from a flat mapping; unknown keys are rejected."""
    known = set(ModelParams.field_names())
    unknown = sorted(set(data) - known)
    if unknown:
        raise ParameterError(f"unknown parameter field(s): {', '.join(unknown)}")
    values = {}
    for key, value in data.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParameterError(f"{key} must be a number, got {value!r}")
        values[key] = float(value)
    if base is None:
        return ModelParams(**values)
    return base.replace(**values)


def params_from_json(source: str | Path) -> ModelParams:
    """Parse a JSON object (text or a path to a file) into ``ModelParams``."""
    if isinstance(source, Path) or not source.lstrip().startswith("{"):
        text = Path(source).read_text()
    else:
        text = source
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ParameterError("parameter JSON must be an object")
    return params_from_dict(data)


@dataclass(frozen=True)
class ProbeGrid:
    """Uniform grid of probe-exciton detunings (GHz), endpoints inclusive."""

    delta_s_min: float = -3.0
    delta_s_max: float = 3.0
    n_points: int = 2001

    def __post_init__(self):
        if not (math.isfinite(self.delta_s_min) and math.isfinite(self.delta_s_max)):
            raise ParameterError("grid bounds must be finite")
        if not self.delta_s_min < self.delta_s_max:
            raise ParameterError("delta_s_min must be < delta_s_max")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise ParameterError("n_points must be an integer ≥ 2")

    @property
    def step(self) -> float:
        return (self.delta_s_max - self.delta_s_min) / (self.n_points - 1)

    def values(self) -> np.ndarray:
        return np.linspace(self.delta_s_min, self.delta_s_max, int(self.n_points))


@dataclass(frozen=True)
class GroupIndexScale:
    """Absolute group-index prefactor 2 pi omega_e rho mu^2 / (hbar Gamma2).

    Left at 1 the group index is reported in units of this prefactor.
    """

    scale_pi: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.scale_pi) and self.scale_pi > 0):
            raise ParameterError("scale_pi must be > 0")


def majorana_splitting(l: float, xi: float, prefactor: float) -> float:
    """Majorana hybridisation energy ``prefactor * exp(-l / xi)``.

    ``l`` is the nanowire length and ``xi`` the superconducting coherence
    length (same units). The material-dependent prefactor is supplied by the
    caller.
    """
    if not xi > 0:
        raise ParameterError("xi must be > 0")
    if not l >= 0:
        raise ParameterError("l must be ≥ 0")
    if not prefactor >= 0:
        raise ParameterError("prefactor must be ≥ 0")
    return prefactor * math.exp(-l / xi)
