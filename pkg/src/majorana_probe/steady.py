"""Steady state of the pumped dot-Majorana system (probe off).

The population inversion w0 = 2 <S^z> solves a cubic; the coherences follow
by back-substitution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import mean_field_rhs
from .exceptions import SingularityError, SolverError
from .params import ModelParams, validate_params

__all__ = [
    "SteadyState",
    "cubic_coefficients",
    "cubic_residual",
    "solve_population_inversion",
    "steady_amplitudes",
    "steady_state",
    "stationary_residuals",
]

HOMOTOPY_STEPS = 64
_ROOT_SLACK = 1e-9


@dataclass(frozen=True)
class SteadyState:
    w0: float
    s0: complex = 0j
    f0: complex = 0j
    residual: float = 0.0
    n_admissible: int = 1
    roots: tuple[complex, ...] = ()

    @property
    def bistable(self) -> bool:
        return self.n_admissible > 1


@dataclass(frozen=True)
class _Aux:
    A: float
    B: float
    C: float
    D: float


def _aux(p: ModelParams) -> _Aux:
    A = p.beta1**2 + p.beta2**2
    D = p.delta_m**2 + p.kappa_m**2 / 4
    B = p.gamma2 * p.kappa_m - 2 * p.delta_c * p.delta_m
    C = (p.delta_c**2 + p.gamma2**2) * D
    return _Aux(A, B, C, D)


def cubic_coefficients(p: ModelParams) -> tuple[float, float, float, float]:
    """Coefficients (c3, c2, c1, c0) of the inversion cubic c3 w^3 + ... + c0 = 0."""
    a = _aux(p)
    g1 = p.gamma1
    c3 = g1 * a.A**2
    c2 = g1 * a.A * (a.A - a.B)
    c1 = g1 * (a.C - a.A * a.B) + 4 * p.omega_c_rabi_sq * p.gamma2 * a.D
    c0 = g1 * a.C
    return c3, c2, c1, c0


def _factored(p: ModelParams, w: float, omega_sq: float | None = None) -> tuple[float, float]:
    # Gamma1 (w+1) Q(w) + 4 Omega^2 Gamma2 D w and its derivative; the
    # factored form keeps precision near w = -1.
    a = _aux(p)
    om2 = p.omega_c_rabi_sq if omega_sq is None else omega_sq
    q = a.A**2 * w * w - a.A * a.B * w + a.C
    dq = 2 * a.A**2 * w - a.A * a.B
    value = p.gamma1 * (w + 1) * q + 4 * om2 * p.gamma2 * a.D * w
    deriv = p.gamma1 * (q + (w + 1) * dq) + 4 * om2 * p.gamma2 * a.D
    return value, deriv


def cubic_residual(p: ModelParams, w: float) -> float:
    """|cubic(w)| divided by the largest coefficient magnitude."""
    c = cubic_coefficients(p)
    scale = max(abs(x) for x in c)
    return abs(np.polyval(c, w)) / scale


def _polish(p: ModelParams, w: float, omega_sq: float | None = None) -> float:
    # Safeguarded Newton inside [-1, 0]; the cubic is < 0 at -1 and > 0 at 0
    # whenever the pump is on.
    lo, hi = -1.0, 0.0
    for _ in range(100):
        value, deriv = _factored(p, w, omega_sq)
        if value == 0.0:
            return w
        if value < 0:
            lo = max(lo, w)
        else:
            hi = min(hi, w)
        step = value / deriv if deriv != 0 else math.inf
        w_new = w - step
        if not (lo <= w_new <= hi) or not math.isfinite(w_new):
            w_new = 0.5 * (lo + hi)
        if abs(w_new - w) <= 4e-16 * max(1.0, abs(w)):
            return w_new
        w = w_new
    return w


def _admissible(roots: np.ndarray) -> list[float]:
    out = []
    for r in roots:
        if abs(r.imag) <= 1e-7 * max(1.0, abs(r.real)) and -1 - _ROOT_SLACK <= r.real <= _ROOT_SLACK:
            out.append(min(0.0, max(-1.0, float(r.real))))
    return sorted(out)


def _roots(p: ModelParams, omega_sq: float) -> np.ndarray:
    c = list(cubic_coefficients(p.replace(omega_c_rabi_sq=omega_sq)))
    while c and c[0] == 0.0:
        c.pop(0)
    if len(c) <= 1:
        return np.array([], dtype=complex)
    return np.roots(c).astype(complex)


def _distinct(values: list[float], p: ModelParams, omega_sq: float) -> list[float]:
    polished = sorted(_polish(p, v, omega_sq) for v in values)
    out: list[float] = []
    for v in polished:
        if not out or abs(v - out[-1]) > 1e-9:
            out.append(v)
    return out


def solve_population_inversion(p: ModelParams) -> SteadyState:
    """Population inversion w0 in [-1, 0].

    When several admissible roots exist the one continuously connected to the
    undriven ground state (w0 = -1 at zero pump) is returned, found by ramping
    the pump intensity up in ``HOMOTOPY_STEPS`` steps.
    """
    validate_params(p).raise_if_invalid()
    if p.omega_c_rabi_sq == 0.0:
        return SteadyState(w0=-1.0, residual=cubic_residual(p, -1.0), roots=tuple(_roots(p, 0.0)))
    roots = _roots(p, p.omega_c_rabi_sq)
    candidates = _distinct(_admissible(roots), p, p.omega_c_rabi_sq)
    if not candidates:
        # np.roots can lose a root that is badly conditioned; bracket directly.
        if _factored(p, -1.0)[0] < 0 < _factored(p, 0.0)[0]:
            candidates = [_polish(p, -0.5)]
        else:
            raise SolverError("no real root of the inversion cubic in [-1, 0]", roots=tuple(roots))
    if len(candidates) == 1:
        w0 = candidates[0]
    else:
        w0 = -1.0
        for om2 in np.linspace(0.0, p.omega_c_rabi_sq, HOMOTOPY_STEPS + 1)[1:]:
            local = _admissible(_roots(p, om2)) or [w0]
            w0 = min(local, key=lambda r: abs(r - w0))
            w0 = _polish(p, w0, om2)
        w0 = min(candidates, key=lambda r: abs(r - w0))
    return SteadyState(
        w0=w0,
        residual=cubic_residual(p, w0),
        n_admissible=len(candidates),
        roots=tuple(roots),
    )


def steady_amplitudes(p: ModelParams, w0: float) -> tuple[complex, complex]:
    """Steady coherences (S0, f0) for a given inversion."""
    majorana = 1j * p.delta_m + p.kappa_m / 2
    if majorana == 0:
        raise SingularityError("Majorana denominator i*delta_m + kappa_m/2 vanishes")
    A = p.beta1**2 + p.beta2**2
    dot = 1j * p.delta_c + p.gamma2 - w0 * A / majorana
    if dot == 0:
        raise SingularityError("dot denominator vanishes")
    s0 = -1j * p.omega_c * w0 / dot
    f0 = p.coupling * s0 / majorana
    return complex(s0), complex(f0)


def steady_state(p: ModelParams) -> SteadyState:
    """Full steady state: inversion plus coherences."""
    partial = solve_population_inversion(p)
    s0, f0 = steady_amplitudes(p, partial.w0)
    return SteadyState(
        w0=partial.w0,
        s0=s0,
        f0=f0,
        residual=partial.residual,
        n_admissible=partial.n_admissible,
        roots=partial.roots,
    )


def stationary_residuals(
    p: ModelParams, ss: SteadyState, variant: str = "symmetrized"
) -> tuple[complex, complex, complex]:
    """Right-hand sides of the mean-field equations at the steady state (probe off)."""
    return mean_field_rhs(p, ss.w0 / 2, ss.s0, ss.f0, variant=variant)
