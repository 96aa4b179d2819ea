"""Frozen figure recipes and the checks that go with them.

Each recipe is a :class:`~majorana_probe.sweep.SweepSpec` plus a list of
claims. A claim is either asserted (it decides pass/fail) or informational
(its measurement is reported but not judged).

Grid choices:
beta2 families are {0, 1, 2, 3} x beta1 with beta1 = 0.05 GHz; beta1 sweeps
cover [0.005, 0.2] GHz in 80 points; pump sweeps cover
Omega_c^2 in [0.0005, 0.02] GHz^2 in 40 points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .exceptions import FeatureError, ParameterError
from .features import SpectrumFeatures, detect_features, mirror_mismatch
from .params import REFERENCE_PARAMS, ProbeGrid
from .response import GroupIndexResult, secant_derivative, spectrum_arrays
from .sweep import Axis, SweepResult, SweepSpec, run_sweep

__all__ = [
    "ClaimResult",
    "FigureRecipe",
    "FigureReport",
    "FIGURES",
    "figure",
    "sign_pattern",
    "POSITION_TOL",
    "SPLITTING_TOL",
]

BETA1 = 0.05
BETA2_FAMILY = tuple(k * BETA1 for k in range(4))
PAIRS = ((0.05, 0.05), (0.07, 0.03), (0.09, 0.01))
BETA1_GRID = tuple(float(v) for v in np.linspace(0.005, 0.2, 80))
PUMP_GRID = tuple(float(v) for v in np.linspace(0.0005, 0.02, 40))
SEVEN = (-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5)
DETAIL_GRID = ProbeGrid(-0.6, 0.6, 2401)

POSITION_TOL = 0.05
SPLITTING_TOL = 0.1
DERIVATIVE_RTOL = 1e-4


@dataclass(frozen=True)
class ClaimResult:
    name: str
    passed: bool
    detail: str
    asserted: bool = True

    @property
    def label(self) -> str:
        if not self.asserted:
            return "measured"
        return "pass" if self.passed else "FAIL"


@dataclass(frozen=True)
class FigureRecipe:
    id: str
    description: str
    spec: SweepSpec
    claims: tuple[Callable[["FigureReport"], list[ClaimResult]], ...] = ()


@dataclass
class FigureReport:
    recipe: FigureRecipe
    result: SweepResult
    features: dict[tuple[int, ...], SpectrumFeatures | str] = field(default_factory=dict)
    claims: list[ClaimResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims if c.asserted)

    def table(self) -> str:
        lines = [f"{self.recipe.id}: {self.recipe.description}"]
        for c in self.claims:
            lines.append(f"  {c.name}: {c.label} ({c.detail})")
        return "\n".join(lines)

    def spectra(self):
        """(cell, features) for every successful spectrum cell."""
        for cell in self.result.cells:
            feats = self.features.get(cell.index)
            if isinstance(feats, SpectrumFeatures):
                yield cell, feats

    def curves(self) -> dict[int, list]:
        """Group-index cells keyed by their axis1 index, in axis2 order."""
        out: dict[int, list] = {}
        for cell in self.result.cells:
            out.setdefault(cell.index[0], []).append(cell)
        return out


def sign_pattern(values) -> str:
    """Run-length sign string, e.g. ``"+-+"`` for positive, negative, positive bands."""
    out = ""
    for v in values:
        s = "+" if v > 0 else "-" if v < 0 else "0"
        if not out or out[-1] != s:
            out += s
    return out


def _label(cell) -> str:
    p = cell.params
    return f"dc={p.delta_c:g} dm={p.delta_m:g} b1={p.beta1:g} b2={p.beta2:g} W2={p.omega_c_rabi_sq:g}"


# spectrum claims ------------------------------------------------------------

def _symmetric_splitting(asym_tol: float, dip_frac: float | None = None):
    def check(report: FigureReport) -> list[ClaimResult]:
        ok = True
        parts = []
        for cell, f in report.spectra():
            if f.asymmetry is None:
                ok = False
                parts.append(f"{_label(cell)}: single peak")
                continue
            two = sorted(sorted(f.peaks, key=lambda e: e.height)[-2:], key=lambda e: e.position)
            centre = (two[0].position + two[1].position) / 2
            good = abs(f.asymmetry) < asym_tol and abs(centre) <= POSITION_TOL
            ok &= good
            parts.append(f"b2={cell.params.beta2:g}: a={f.asymmetry:+.4f} centre={centre:+.4f}")
        out = [ClaimResult("symmetric splitting", ok, "; ".join(parts))]
        if dip_frac is not None:
            ok = True
            parts = []
            for cell, f in report.spectra():
                dip = f.dip_near(0.0, POSITION_TOL)
                ratio = dip.height / f.tallest.height if dip else float("inf")
                ok &= ratio < dip_frac
                parts.append(f"b2={cell.params.beta2:g}: dip/peak={ratio:.2e}")
            out.append(ClaimResult(f"transparency dip below {dip_frac:.0%} of peak", ok, "; ".join(parts)))
        return out
    return check


def _splitting_grows(report: FigureReport) -> list[ClaimResult]:
    splits = [f.splitting for _, f in report.spectra()]
    ok = all(s is not None for s in splits) and all(b >= a for a, b in zip(splits, splits[1:]))
    detail = ", ".join("none" if s is None else f"{s:.4f}" for s in splits)
    return [ClaimResult("splitting non-decreasing in beta2", ok, detail)]


def _dip_at(position: float, name: str):
    def check(report: FigureReport) -> list[ClaimResult]:
        ok = True
        parts = []
        for cell, f in report.spectra():
            dip = f.dip_near(position, POSITION_TOL)
            ok &= dip is not None
            found = f"{dip.position:+.4f}" if dip else "none"
            deepest = f"{f.deepest_dip.position:+.4f}" if f.deepest_dip else "none"
            parts.append(f"b2={cell.params.beta2:g}: dip {found} (deepest {deepest})")
        return [ClaimResult(name, ok, "; ".join(parts))]
    return check


def _fano_asymmetry(threshold: float):
    def check(report: FigureReport) -> list[ClaimResult]:
        ok = True
        parts = []
        for cell, f in report.spectra():
            a = f.asymmetry
            ok &= a is not None and abs(a) > threshold
            parts.append(f"b2={cell.params.beta2:g}: a={'none' if a is None else f'{a:+.4f}'}")
        return [ClaimResult(f"Fano asymmetry |a| > {threshold:g}", ok, "; ".join(parts))]
    return check


def _splitting_equals_detuning_difference(report: FigureReport) -> list[ClaimResult]:
    ok = True
    parts = []
    for cell, f in report.spectra():
        target = cell.params.delta_c - cell.params.delta_m
        s = f.splitting
        ok &= s is not None and abs(s - target) <= SPLITTING_TOL
        parts.append(f"b2={cell.params.beta2:g}: {'none' if s is None else f'{s:.4f}'} vs {target:g}")
    return [ClaimResult("splitting = delta_c - delta_m", ok, "; ".join(parts))]


def _fig8_claims(report: FigureReport) -> list[ClaimResult]:
    out = []
    for cell, f in report.spectra():
        p = cell.params
        if p.delta_c == p.delta_m:
            a = f.asymmetry
            ok = a is not None and abs(a) < 0.05
            out.append(ClaimResult("symmetric line at delta_c = delta_m", ok,
                                   f"a={'none' if a is None else f'{a:+.4f}'}"))
    dips = []
    at_minus_one = True
    for cell, f in report.spectra():
        deepest = f.deepest_dip
        dips.append(f"dc={cell.params.delta_c:+g}: {'none' if deepest is None else f'{deepest.position:+.3f}'}")
        at_minus_one &= f.dip_near(-1.0, POSITION_TOL) is not None
    out.append(ClaimResult("transparency dip at delta_s = -1.0 for every delta_c", at_minus_one,
                           "deepest dips " + "; ".join(dips), asserted=False))
    return out


def _mirror(report: FigureReport) -> list[ClaimResult]:
    grid = report.recipe.spec.grid
    x = grid.values()
    dc = abs(report.recipe.spec.base.delta_c)
    ok = True
    parts = []
    for phi in (0.5, 1.0, 1.5):
        _, a = spectrum_arrays(REFERENCE_PARAMS.replace(delta_c=dc, delta_m=phi), x)
        _, b = spectrum_arrays(REFERENCE_PARAMS.replace(delta_c=-dc, delta_m=-phi), x)
        mismatch, s0 = mirror_mismatch(x, a.imag, b.imag)
        ok &= mismatch < 0.05
        parts.append(f"phi={phi:g}: mismatch={mismatch:.2e} s0={s0:+.3f}")
    return [ClaimResult("mirror symmetry delta_m -> -delta_m, delta_c -> -delta_c", ok, "; ".join(parts))]


# group-index claims ---------------------------------------------------------

def _signs(expected: dict[float, str] | str, key: str):
    def check(report: FigureReport) -> list[ClaimResult]:
        ok = True
        parts = []
        for _, cells in sorted(report.curves().items()):
            if not all(c.ok for c in cells):
                ok = False
                parts.append("failed cells")
                continue
            vals = [c.value.ng_over_pi for c in cells]
            label = getattr(cells[0].params, key)
            want = expected if isinstance(expected, str) else expected[label]
            got = sign_pattern(vals)
            ok &= got == want
            parts.append(f"{key}={label:g}: {got} (want {want})")
        return [ClaimResult("group-index sign pattern", ok, "; ".join(parts))]
    return check


def _derivative_integrity(report: FigureReport) -> list[ClaimResult]:
    worst = 0.0
    where = ""
    failed = 0
    for cell in report.result.cells:
        if not cell.ok:
            failed += 1
            continue
        g: GroupIndexResult = cell.value
        sec = secant_derivative(cell.params, path=report.recipe.spec.path)
        rel = abs(g.derivative_estimate - sec) / max(abs(g.derivative_estimate), abs(sec), 1e-300)
        if rel > worst:
            worst, where = rel, _label(cell)
    ok = failed == 0 and worst < DERIVATIVE_RTOL
    detail = f"max rel err {worst:.2e} at {where}" + (f"; {failed} failed cells" if failed else "")
    return [ClaimResult("Richardson vs dense-grid secant", ok, detail)]


def _cells_ok(report: FigureReport) -> list[ClaimResult]:
    bad = [c for c in report.result.cells if not c.ok]
    return [ClaimResult("all cells evaluated", not bad, f"{len(bad)} failed of {len(report.result.cells)}")]


# recipes ---------------------------------------------------------------------

def _spectrum(dc, dm, axis, grid=None, base=None):
    base = (base or REFERENCE_PARAMS).replace(delta_c=dc, delta_m=dm)
    return SweepSpec(base=base, quantity="spectrum", axis1=axis, grid=grid or ProbeGrid())


def _gi(dc, dm, axis1, axis2, base=None):
    base = (base or REFERENCE_PARAMS).replace(delta_c=dc, delta_m=dm)
    return SweepSpec(base=base, quantity="group_index", axis1=axis1, axis2=axis2)


def _family():
    return Axis("beta2", BETA2_FAMILY)


def _pairs():
    return Axis(("beta1", "beta2"), PAIRS)


def _build() -> dict[str, FigureRecipe]:
    r: dict[str, FigureRecipe] = {}

    def add(id_, desc, spec, *claims):
        r[id_] = FigureRecipe(id_, desc, spec, (_cells_ok,) + claims)

    sym = _symmetric_splitting(0.02, dip_frac=0.02)
    add("fig2a", "absorption, beta2 family, delta_c = delta_m = 0", _spectrum(0, 0, _family()), sym, _splitting_grows)
    add("fig2b", "dispersion, beta2 family, delta_c = delta_m = 0", _spectrum(0, 0, _family()))
    add("fig2c", "absorption, (beta1, beta2) pairs, delta_c = delta_m = 0", _spectrum(0, 0, _pairs()),
        _symmetric_splitting(0.02))
    add("fig2d", "dispersion, (beta1, beta2) pairs, delta_c = delta_m = 0", _spectrum(0, 0, _pairs()))
    add("fig3a", "absorption, beta2 family, delta_c = 0.5, delta_m = 0", _spectrum(0.5, 0, _family()),
        _dip_at(0.0, "transparency dip near delta_s = 0"), _fano_asymmetry(0.05))
    add("fig3b", "absorption detail, delta_c = 0.5, delta_m = 0", _spectrum(0.5, 0, _family(), DETAIL_GRID))
    add("fig3c", "dispersion, delta_c = 0.5, delta_m = 0", _spectrum(0.5, 0, _family()))
    add("fig3d", "dispersion detail, delta_c = 0.5, delta_m = 0", _spectrum(0.5, 0, _family(), DETAIL_GRID))
    add("fig4a", "group index vs beta1, delta_c = delta_m = 0",
        _gi(0, 0, Axis("beta2", (0.0, 0.1)), Axis("beta1", BETA1_GRID)),
        _signs("+-+", "beta2"), _derivative_integrity)
    add("fig4b", "group index vs beta1, delta_c = 0.5, delta_m = 0",
        _gi(0.5, 0, Axis("beta2", (0.0, 0.1)), Axis("beta1", BETA1_GRID)),
        _signs("-+", "beta2"), _derivative_integrity)
    add("fig5a", "absorption, beta2 family, delta_c = 0, delta_m = -0.5", _spectrum(0, -0.5, _family()),
        _dip_at(-0.5, "transparency dip at delta_s = -0.5"))
    add("fig5b", "absorption detail, delta_c = 0, delta_m = -0.5", _spectrum(0, -0.5, _family(), DETAIL_GRID))
    add("fig5c", "dispersion, delta_c = 0, delta_m = -0.5", _spectrum(0, -0.5, _family()))
    add("fig5d", "dispersion detail, delta_c = 0, delta_m = -0.5", _spectrum(0, -0.5, _family(), DETAIL_GRID))
    add("fig6a", "group index vs beta1, delta_c = 0, delta_m = -0.5",
        _gi(0, -0.5, Axis("beta2", (0.0, 0.1)), Axis("beta1", BETA1_GRID)), _derivative_integrity)
    add("fig6b", "group index vs pump, beta1 = 0.05, beta2 = 0, delta_c = 0, delta_m = -0.5",
        _gi(0, -0.5, Axis("beta2", (0.0,)), Axis("omega_c_rabi_sq", PUMP_GRID)),
        _signs("+", "beta2"), _derivative_integrity)
    add("fig6c", "group index vs pump, (beta1, beta2) pairs, delta_c = 0, delta_m = -0.5",
        _gi(0, -0.5, _pairs(), Axis("omega_c_rabi_sq", PUMP_GRID)), _derivative_integrity)
    add("fig6d", "absorption and dispersion, beta2 = 5 beta1, delta_c = 0, delta_m = -0.5",
        _spectrum(0, -0.5, Axis("beta2", (5 * BETA1,))))
    add("fig7a", "absorption, beta2 family, delta_c = 0.5, delta_m = -0.5", _spectrum(0.5, -0.5, _family()),
        _splitting_equals_detuning_difference)
    add("fig7b", "absorption detail, delta_c = 0.5, delta_m = -0.5",
        _spectrum(0.5, -0.5, _family(), ProbeGrid(-1.3, -0.7, 2401)))
    add("fig7c", "dispersion, delta_c = 0.5, delta_m = -0.5", _spectrum(0.5, -0.5, _family()))
    add("fig7d", "dispersion detail, delta_c = 0.5, delta_m = -0.5",
        _spectrum(0.5, -0.5, _family(), ProbeGrid(-1.3, -0.7, 2401)))
    add("fig8", "absorption for seven delta_c at delta_m = -0.5", _spectrum(0, -0.5, Axis("delta_c", SEVEN)),
        _fig8_claims)
    add("fig9a", "absorption for seven delta_m at delta_c = 0.5", _spectrum(0.5, 0, Axis("delta_m", SEVEN)),
        _mirror)
    add("fig9b", "absorption for seven delta_m at delta_c = -0.5", _spectrum(-0.5, 0, Axis("delta_m", SEVEN)),
        _mirror)
    add("fig10a", "group index vs beta1, delta_c = 0.5, delta_m = -0.5",
        _gi(0.5, -0.5, Axis("beta2", (0.0, 0.1)), Axis("beta1", BETA1_GRID)), _derivative_integrity)
    add("fig10b", "group index vs pump for four delta_c, delta_m = -0.5",
        _gi(0, -0.5, Axis("delta_c", (-1.0, -0.5, 0.5, 1.0)), Axis("omega_c_rabi_sq", PUMP_GRID)),
        _derivative_integrity)
    add("fig10c", "group index vs pump, delta_m = -0.5 (blue) and 0.5 (red), delta_c = 0.5",
        _gi(0.5, 0, Axis("delta_m", (-0.5, 0.5)), Axis("omega_c_rabi_sq", PUMP_GRID)),
        _signs({-0.5: "-+", 0.5: "+-"}, "delta_m"), _derivative_integrity)
    add("fig10d", "group index vs pump, delta_m = -0.5 and 0.5, delta_c = -0.5",
        _gi(-0.5, 0, Axis("delta_m", (-0.5, 0.5)), Axis("omega_c_rabi_sq", PUMP_GRID)),
        _derivative_integrity)
    return r


FIGURES: dict[str, FigureRecipe] = _build()


def figure(id_: str, workers: int = 1) -> FigureReport:
    """Run a frozen recipe, extract features and evaluate its claims."""
    try:
        recipe = FIGURES[id_]
    except KeyError:
        raise ParameterError(f"unknown figure {id_!r}; known: {', '.join(FIGURES)}") from None
    result = run_sweep(recipe.spec, workers=workers)
    report = FigureReport(recipe, result)
    if recipe.spec.quantity == "spectrum":
        for cell in result.cells:
            if cell.ok:
                try:
                    report.features[cell.index] = detect_features(cell.value)
                except FeatureError as exc:
                    report.features[cell.index] = str(exc)
    for claim in recipe.claims:
        report.claims.extend(claim(report))
    return report
