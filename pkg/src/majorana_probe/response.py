"""Linear probe susceptibility, spectra and group index.

Two independent routes give chi(1):

* :func:`chi1_linear_system` solves the 6x6 sideband system obtained from the
  linearised mean-field equations. This is the authoritative route.
* :func:`chi1_closed_form` evaluates the closed-form expression
  through its auxiliary quantities (Pi, eps, Lambda).

All public grids are in the probe-exciton detuning ``delta_s``; the formulas
use the probe-pump detuning ``delta = delta_s + delta_c``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .dynamics import EQ3_VARIANTS, check_eq3_variant
from .exceptions import DifferentiationError, ParameterError, SingularityError
from .params import GroupIndexScale, ModelParams, ProbeGrid
from .steady import SteadyState, steady_state

__all__ = [
    "PATHS",
    "EQ10_VARIANTS",
    "AuxiliaryBlock",
    "SusceptibilityPoint",
    "GroupIndexResult",
    "DivergenceReport",
    "auxiliaries",
    "chi1_closed_form",
    "chi1_linear_system",
    "chi1",
    "spectrum",
    "spectrum_arrays",
    "group_index",
    "divergence_report",
    "write_spectrum_csv",
    "secant_derivative",
]

PATHS = ("linear_system", "closed_form")

# "eps1" builds Lambda4 from eps1; "eps2" swaps in eps2 following the Lambda3
# pattern; "conjugate" is the form derived from the sideband equations:
# -w0 (b1 + i b2) eps2* - Pi2 eps3 with Pi2 built from f0*.
EQ10_VARIANTS = ("eps1", "eps2", "conjugate")
DEFAULT_EQ10_VARIANT = "conjugate"


def _check_eq10_variant(variant: str) -> str:
    if variant not in EQ10_VARIANTS:
        raise ParameterError(f"unknown closed-form variant {variant!r}; expected one of {EQ10_VARIANTS}")
    return variant


def _check_path(path: str) -> str:
    if path not in PATHS:
        raise ParameterError(f"unknown path {path!r}; expected one of {PATHS}")
    return path


@dataclass(frozen=True)
class AuxiliaryBlock:
    pi1: complex
    pi2: complex
    eps1: complex
    eps2: complex
    eps3: complex
    eps4: complex
    eps5: complex
    eps6: complex
    eps7: complex
    eps8: complex
    lambda1: complex
    lambda2: complex
    lambda3: complex
    lambda4: complex


@dataclass(frozen=True)
class SusceptibilityPoint:
    delta_s: float
    chi: complex

    @property
    def absorption(self) -> float:
        return self.chi.imag

    @property
    def dispersion(self) -> float:
        return self.chi.real


@dataclass(frozen=True)
class GroupIndexResult:
    ng_over_pi: float
    derivative_estimate: float
    step_used: float
    richardson_error: float
    scale_pi: float = 1.0

    @property
    def ng(self) -> float:
        return self.ng_over_pi * self.scale_pi

    @property
    def regime(self) -> str:
        return "slow" if self.ng_over_pi > 0 else "fast"


def auxiliaries(p: ModelParams, ss: SteadyState, delta, variant: str = DEFAULT_EQ10_VARIANT) -> AuxiliaryBlock:
    """Intermediate quantities of the closed form at probe-pump detuning ``delta``.

    ``delta`` may be a scalar or an array; fields then broadcast.
    """
    _check_eq10_variant(variant)
    d = np.asarray(delta, dtype=float)
    b = p.coupling
    bc = b.conjugate()
    om = p.omega_c
    w0, s0, f0 = ss.w0, ss.s0, ss.f0
    k2 = p.kappa_m / 2

    pi1 = 2 * (bc * f0 - 1j * om)
    if variant == "conjugate":
        pi2 = 2 * (b * f0.conjugate() + 1j * om)
    else:
        pi2 = 2 * (b * f0 + 1j * om)
    eps1 = b / (1j * (p.delta_m - d) + k2)
    eps2 = b / (1j * (p.delta_m + d) + k2)
    lo = p.gamma1 - 1j * d
    hi = p.gamma1 + 1j * d
    eps3 = (1j * om - bc * f0 - b * s0 * np.conj(eps2)) / lo
    eps4 = (1j * om + b * f0.conjugate() + bc * s0.conjugate() * eps1) / lo
    eps5 = (1j * om - bc * f0 - b * s0 * np.conj(eps1)) / hi
    eps6 = (1j * om + b * f0.conjugate() + bc * s0.conjugate() * eps2) / hi
    eps7 = 1j * s0.conjugate() / lo
    eps8 = 1j * s0 / hi
    g2 = p.gamma2
    dc = p.delta_c
    lambda1 = 1j * (dc - d) + g2 - w0 * bc * eps1 + pi1 * eps4
    lambda2 = -1j * (dc - d) + g2 - w0 * b * np.conj(eps1) - pi2 * eps5
    lambda3 = 1j * (dc + d) + g2 - w0 * bc * eps2 + pi1 * eps6
    if variant == "eps1":
        lambda4 = -1j * (dc + d) + g2 - w0 * b * eps1 + pi2 * eps3
    elif variant == "eps2":
        lambda4 = -1j * (dc + d) + g2 - w0 * b * eps2 + pi2 * eps3
    else:
        lambda4 = -1j * (dc + d) + g2 - w0 * b * np.conj(eps2) - pi2 * eps3
    return AuxiliaryBlock(
        pi1=pi1, pi2=pi2,
        eps1=eps1, eps2=eps2, eps3=eps3, eps4=eps4,
        eps5=eps5, eps6=eps6, eps7=eps7, eps8=eps8,
        lambda1=lambda1, lambda2=lambda2, lambda3=lambda3, lambda4=lambda4,
    )


def _closed_form(p: ModelParams, ss: SteadyState, delta, variant: str) -> np.ndarray:
    x = auxiliaries(p, ss, delta, variant)
    num = (x.eps7 * x.pi1 * (x.lambda4 + x.eps3 * x.pi2) - 1j * ss.w0 * x.lambda4) * p.gamma2
    den = x.lambda1 * x.lambda4 + x.pi1 * x.pi2 * x.eps3 * x.eps4
    if np.any(den == 0):
        raise SingularityError("closed-form denominator vanishes", delta=delta)
    return num / den


def chi1_closed_form(
    p: ModelParams, ss: SteadyState, delta: float, variant: str = DEFAULT_EQ10_VARIANT
) -> complex:
    """chi(1) from the closed-form expression at probe-pump detuning ``delta``."""
    return complex(_closed_form(p, ss, delta, variant))


def _sideband_system(p: ModelParams, ss: SteadyState, delta: np.ndarray, eq3_variant: str):
    """Stacked matrices ``M`` and right-hand side ``r`` with M u = r.

    u = (S+, S-*, Sz+, Sz-*, f+, f-*), the e^{-i delta t} amplitudes of the
    fluctuations and of their conjugates, for unit probe drive.
    """
    b = p.coupling
    bc = b.conjugate()
    om = p.omega_c
    z0 = ss.w0 / 2
    s0, f0 = ss.s0, ss.f0
    if eq3_variant == "symmetrized":
        a_s, a_sc = -b * f0.conjugate() - 1j * om, -bc * f0 + 1j * om
        a_f, a_fc = -bc * s0.conjugate(), -b * s0
    else:
        a_s, a_sc = -b * f0.conjugate() - 1j * om, -b * f0 + 1j * om
        a_f, a_fc = -b * s0.conjugate(), -b * s0

    # Drift matrix J of du/dt = J u + drive, rows in the order of u.
    J = np.zeros((6, 6), dtype=complex)
    J[0, 0] = -(1j * p.delta_c + p.gamma2)
    J[0, 2] = 2 * bc * f0 - 2j * om
    J[0, 4] = 2 * bc * z0
    J[1, 1] = -(-1j * p.delta_c + p.gamma2)
    J[1, 3] = 2 * b * f0.conjugate() + 2j * om
    J[1, 5] = 2 * b * np.conj(z0)
    J[2, :] = [a_s, a_sc, -p.gamma1, 0, a_f, a_fc]
    J[3, :] = [np.conj(a_sc), np.conj(a_s), 0, -p.gamma1, np.conj(a_fc), np.conj(a_f)]
    J[4, 0] = b
    J[4, 4] = -(1j * p.delta_m + p.kappa_m / 2)
    J[5, 1] = bc
    J[5, 5] = -(-1j * p.delta_m + p.kappa_m / 2)
    drive = np.array([-2j * z0, 0, 1j * np.conj(s0), 1j * np.conj(s0), 0, 0], dtype=complex)

    d = np.atleast_1d(np.asarray(delta, dtype=float))
    M = np.broadcast_to(J, (d.size, 6, 6)).copy()
    M[:, np.arange(6), np.arange(6)] += 1j * d[:, None]
    return M, -drive


def _linear_system(p: ModelParams, ss: SteadyState, delta, eq3_variant: str) -> np.ndarray:
    check_eq3_variant(eq3_variant)
    M, r = _sideband_system(p, ss, delta, eq3_variant)
    try:
        u = np.linalg.solve(M, np.broadcast_to(r, (M.shape[0], 6))[..., None])[..., 0]
    except np.linalg.LinAlgError:
        u = None
    if u is None or not np.all(np.isfinite(u)):
        smin = np.linalg.svd(M, compute_uv=False)[:, -1].min()
        raise SingularityError("sideband system is singular", smallest_singular_value=float(smin))
    chi = p.gamma2 * u[:, 0]
    return chi.reshape(np.shape(delta))


def chi1_linear_system(
    p: ModelParams, ss: SteadyState, delta: float, eq3_variant: str = "symmetrized"
) -> complex:
    """chi(1) by solving the linearised sideband equations with unit probe drive."""
    return complex(_linear_system(p, ss, delta, eq3_variant))


def chi1(
    p: ModelParams,
    delta,
    *,
    ss: SteadyState | None = None,
    path: str = "linear_system",
    eq3_variant: str = "symmetrized",
    eq10_variant: str = DEFAULT_EQ10_VARIANT,
):
    """Vectorised chi(1) over probe-pump detunings ``delta`` by either path."""
    _check_path(path)
    if ss is None:
        ss = steady_state(p)
    if path == "linear_system":
        return _linear_system(p, ss, delta, eq3_variant)
    return _closed_form(p, ss, delta, eq10_variant)


def spectrum_arrays(
    p: ModelParams,
    grid: ProbeGrid | Sequence[float] | np.ndarray,
    path: str = "linear_system",
    **variants,
) -> tuple[np.ndarray, np.ndarray]:
    """``(delta_s, chi)`` arrays on a probe grid, ascending in delta_s."""
    x = grid.values() if isinstance(grid, ProbeGrid) else np.sort(np.asarray(grid, dtype=float))
    chi = chi1(p, x + p.delta_c, path=path, **variants)
    return x, np.asarray(chi, dtype=complex)


def spectrum(
    p: ModelParams, grid: ProbeGrid, path: str = "linear_system", **variants
) -> list[SusceptibilityPoint]:
    """chi(1) at every grid point, ascending in delta_s."""
    x, chi = spectrum_arrays(p, grid, path, **variants)
    return [SusceptibilityPoint(float(a), complex(c)) for a, c in zip(x, chi)]


def write_spectrum_csv(points: Iterable[SusceptibilityPoint], path: str | Path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["delta_s_ghz", "re_chi", "im_chi"])
        for pt in points:
            writer.writerow([repr(float(pt.delta_s)), repr(pt.chi.real), repr(pt.chi.imag)])
    return path


def _central(fn, x0: float, h: float) -> float:
    return float(np.real(fn(x0 + h) - fn(x0 - h)) / (2 * h))


def _richardson(fn, x0: float, h0: float) -> tuple[float, float]:
    d = [_central(fn, x0, h0 / 2**k) for k in range(3)]
    r1 = [(4 * d[k + 1] - d[k]) / 3 for k in range(2)]
    r2 = (16 * r1[1] - r1[0]) / 15
    return r2, abs(r2 - r1[1])


def group_index(
    p: ModelParams,
    scale: GroupIndexScale | None = None,
    *,
    path: str = "linear_system",
    max_refinements: int = 4,
    **variants,
) -> GroupIndexResult:
    """Group-velocity index at the exciton line (omega_s = omega_e).

    The real part of d chi / d omega_s is estimated by central differences with
    two Richardson halvings starting from a step of 1e-3 Gamma2. If the error
    estimate fails its bound the starting step is cut tenfold, at most
    ``max_refinements`` times.
    """
    scale = scale or GroupIndexScale()
    ss = steady_state(p)

    def fn(delta):
        return chi1(p, delta, ss=ss, path=path, **variants)

    x0 = p.delta_c
    h = 1e-3 * p.gamma2
    history = []
    for _ in range(max_refinements + 1):
        deriv, err = _richardson(fn, x0, h)
        history.append((h, deriv, err))
        if err < 1e-6 * max(1.0, abs(deriv)):
            return GroupIndexResult(
                ng_over_pi=p.gamma2 * deriv,
                derivative_estimate=deriv,
                step_used=h,
                richardson_error=err,
                scale_pi=scale.scale_pi,
            )
        h /= 10
    raise DifferentiationError("Richardson extrapolation did not converge", history=history)


@dataclass
class DivergenceReport:
    """Closed form vs linear system, per formula-variant pair."""

    rows: list[dict] = field(default_factory=list)
    tolerance: float = 1e-8

    def add(self, label: str, eq3_variant: str, eq10_variant: str, max_rel_err: float, worst_delta: float):
        self.rows.append(
            {
                "case": label,
                "eq3_variant": eq3_variant,
                "eq10_variant": eq10_variant,
                "max_rel_err": max_rel_err,
                "worst_delta": worst_delta,
                "agrees": max_rel_err < self.tolerance,
            }
        )

    def by_variant(self) -> dict[tuple[str, str], float]:
        out: dict[tuple[str, str], float] = {}
        for row in self.rows:
            key = (row["eq3_variant"], row["eq10_variant"])
            out[key] = max(out.get(key, 0.0), row["max_rel_err"])
        return out

    def agreeing_variants(self) -> list[tuple[str, str]]:
        return [k for k, v in self.by_variant().items() if v < self.tolerance]

    def selected(self) -> tuple[str, str] | None:
        ranked = sorted(self.by_variant().items(), key=lambda kv: kv[1])
        if ranked and ranked[0][1] < self.tolerance:
            return ranked[0][0]
        return None

    def to_dict(self) -> dict:
        return {
            "tolerance": self.tolerance,
            "rows": self.rows,
            "summary": [
                {"eq3_variant": k[0], "eq10_variant": k[1], "max_rel_err": v, "agrees": v < self.tolerance}
                for k, v in sorted(self.by_variant().items())
            ],
            "selected": self.selected(),
        }


def divergence_report(
    cases: dict[str, ModelParams] | Sequence[ModelParams],
    grid: ProbeGrid | None = None,
    eq3_variants: Sequence[str] = EQ3_VARIANTS,
    eq10_variants: Sequence[str] = EQ10_VARIANTS,
    tolerance: float = 1e-8,
) -> DivergenceReport:
    """Compare the two susceptibility paths for every case and variant pair.

    The error is |chi_ls - chi_cf| / max(1, |chi_ls|), maximised over the grid.
    """
    grid = grid or ProbeGrid()
    if not isinstance(cases, dict):
        cases = {f"case{i}": c for i, c in enumerate(cases)}
    report = DivergenceReport(tolerance=tolerance)
    x = grid.values()
    for label, p in cases.items():
        ss = steady_state(p)
        delta = x + p.delta_c
        for v3 in eq3_variants:
            ref = _linear_system(p, ss, delta, v3)
            for v10 in eq10_variants:
                cf = _closed_form(p, ss, delta, v10)
                rel = np.abs(ref - cf) / np.maximum(1.0, np.abs(ref))
                k = int(np.argmax(rel))
                report.add(label, v3, v10, float(rel[k]), float(x[k]))
    return report


def secant_derivative(p: ModelParams, step: float | None = None, *, path: str = "linear_system", **variants) -> float:
    """Re d chi / d omega_s at the exciton line from one centred secant.

    The default step, Gamma2 / 200, is that of a dense uniform grid; this is
    the plain finite-difference cross-check of :func:`group_index`.
    """
    h = p.gamma2 / 200 if step is None else step
    ss = steady_state(p)
    lo, hi = chi1(p, np.array([p.delta_c - h, p.delta_c + h]), ss=ss, path=path, **variants)
    return float((hi - lo).real / (2 * h))
