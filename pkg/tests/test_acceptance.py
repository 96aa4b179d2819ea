"""Acceptance criteria, one test per criterion (criterion 5 per sub-claim).

Tolerances are the stated ones. A failing test here is a real finding and is
left failing; the analysis lives in the project notes.
"""

from __future__ import annotations

import time

import numpy as np
import pytest

from majorana_probe import (
    REFERENCE_PARAMS,
    FIGURES,
    OracleConfig,
    ProbeGrid,
    divergence_report,
    figure,
    oracle_chi,
    steady_state,
)
from majorana_probe.features import detect_features, mirror_mismatch
from majorana_probe.oracle import ORACLE_DELTAS
from majorana_probe.response import chi1, spectrum_arrays
from majorana_probe.steady import cubic_residual, stationary_residuals

pytestmark = pytest.mark.acceptance

FIG2A = REFERENCE_PARAMS.replace(delta_c=0.0, delta_m=0.0, beta1=0.05, beta2=0.05)


def _claims(fig_id: str) -> dict:
    return {c.name: c for c in figure(fig_id).claims}


def _random_params(rng: np.random.Generator, n: int):
    def logu(size):
        return 10 ** rng.uniform(-4, 0, size)

    g1, g2, km, b1, b2 = (logu(n) for _ in range(5))
    dc, dm = rng.uniform(-2, 2, n), rng.uniform(-2, 2, n)
    om = rng.uniform(0, 0.02, n)
    for i in range(n):
        yield REFERENCE_PARAMS.replace(
            gamma1=g1[i], gamma2=g2[i], kappa_m=km[i], beta1=b1[i], beta2=b2[i],
            delta_c=dc[i], delta_m=dm[i], omega_c_rabi_sq=om[i],
        )


def test_criterion_1_steady_state_residuals():
    rng = np.random.default_rng(20261019)
    sets = list(_random_params(rng, 1000))
    t0 = time.perf_counter()
    worst_cubic = worst_stat = 0.0
    out_of_range = 0
    for p in sets:
        ss = steady_state(p)
        worst_cubic = max(worst_cubic, abs(cubic_residual(p, ss.w0)))
        worst_stat = max(worst_stat, max(abs(r) for r in stationary_residuals(p, ss)))
        out_of_range += not (-1.0 <= ss.w0 <= 0.0)
    elapsed = time.perf_counter() - t0
    print(f"criterion 1: cubic {worst_cubic:.2e}, stationary {worst_stat:.2e}, {elapsed:.2f} s")
    assert out_of_range == 0
    assert worst_cubic < 1e-10
    assert worst_stat < 1e-10
    assert elapsed < 5.0


def test_criterion_2_two_level_reduction():
    for dc in (0.0, 0.3, -1.2):
        p = REFERENCE_PARAMS.replace(beta1=0.0, beta2=0.0, delta_c=dc)
        sat = 4 * p.omega_c_rabi_sq * p.gamma2 / (p.gamma1 * (p.gamma2**2 + dc**2))
        assert abs(steady_state(p).w0 - (-1.0 / (1.0 + sat))) < 1e-12

        weak = p.replace(omega_c_rabi_sq=0.0)
        delta = np.linspace(-3, 3, 201) + dc
        chi = chi1(weak, delta)
        ref = 1j * p.gamma2 / (p.gamma2 + 1j * (dc - delta))
        assert np.max(np.abs(chi - ref)) < 1e-10


def test_criterion_3_cross_path_validation():
    cases = {}
    for fig_id, recipe in FIGURES.items():
        for idx, p in recipe.spec.cells():
            cases.setdefault(p, f"{fig_id}{idx}")
    t0 = time.perf_counter()
    report = divergence_report({label: p for p, label in cases.items()}, ProbeGrid())
    elapsed = time.perf_counter() - t0
    errs = report.by_variant()
    print("criterion 3:", {f"{a}/{b}": f"{v:.1e}" for (a, b), v in sorted(errs.items())}, f"{elapsed:.1f} s")
    assert report.selected() is not None
    assert min(errs.values()) < 1e-8
    assert elapsed < 30.0


def test_criterion_4_oracle_equivalence():
    t0 = time.perf_counter()
    ss = steady_state(FIG2A)
    deltas = np.asarray(ORACLE_DELTAS)
    assert len(deltas) == 21
    analytic = chi1(FIG2A, deltas, ss=ss)
    scale = np.max(np.abs(analytic))
    oracle = np.array([oracle_chi(FIG2A, OracleConfig(delta=d)).chi for d in deltas])
    rel = np.max(np.abs(oracle - analytic)) / scale

    linearity = window = 0.0
    for d, base in zip(deltas, oracle):
        cfg = OracleConfig(delta=d).resolved(FIG2A)
        half = oracle_chi(FIG2A, OracleConfig(delta=d, probe_rabi=cfg.probe_rabi / 2)).chi
        longer = oracle_chi(FIG2A, OracleConfig(delta=d, n_periods=2 * cfg.n_periods)).chi
        linearity = max(linearity, abs(half - base) / abs(base))
        window = max(window, abs(longer - base) / abs(base))
    elapsed = time.perf_counter() - t0
    print(f"criterion 4: rel {rel:.2e}, probe halving {linearity:.2e}, window doubling {window:.2e}, {elapsed:.0f} s")
    assert rel < 1e-2
    assert linearity < 1e-3
    assert window < 1e-3
    assert elapsed < 120.0


def test_criterion_5a_symmetric_splitting_and_dip():
    x, chi = spectrum_arrays(FIG2A, ProbeGrid())
    feats = detect_features((x, chi))
    assert abs(feats.asymmetry) < 0.02
    assert len(feats.peaks) >= 2
    left = max((p for p in feats.peaks if p.position < 0), key=lambda e: e.height)
    right = max((p for p in feats.peaks if p.position > 0), key=lambda e: e.height)
    assert abs(left.position + right.position) < 0.05
    dip = feats.dip_near(0.0, 0.05)
    assert dip is not None and dip.height < 0.02 * feats.tallest.height
    c = _claims("fig2a")
    assert c["symmetric splitting"].passed
    assert c["transparency dip below 2% of peak"].passed


def test_criterion_5b_splitting_grows_with_beta2():
    assert _claims("fig2a")["splitting non-decreasing in beta2"].passed


def test_criterion_5c_fano_dip_at_detuned_cavity():
    c = _claims("fig3a")
    print("criterion 5c:", c["transparency dip near delta_s = 0"].detail, "|", c["Fano asymmetry |a| > 0.05"].detail)
    assert c["transparency dip near delta_s = 0"].passed
    assert c["Fano asymmetry |a| > 0.05"].passed


def test_criterion_5d_dip_follows_majorana_detuning():
    p = REFERENCE_PARAMS.replace(delta_c=0.0, delta_m=-0.5)
    feats = detect_features(spectrum_arrays(p, ProbeGrid()))
    assert feats.dip_near(-0.5, 0.05) is not None
    assert _claims("fig5a")["transparency dip at delta_s = -0.5"].passed


def test_criterion_5e_splitting_equals_detuning_difference():
    p = REFERENCE_PARAMS.replace(delta_c=0.5, delta_m=-0.5)
    feats = detect_features(spectrum_arrays(p, ProbeGrid()))
    assert feats.splitting is not None and abs(feats.splitting - 1.0) < 0.1
    assert _claims("fig7a")["splitting = delta_c - delta_m"].passed


def test_criterion_5f_lorentzian_when_detunings_match():
    c = _claims("fig8")
    line = c["symmetric line at delta_c = delta_m"]
    dips = c["transparency dip at delta_s = -1.0 for every delta_c"]
    print("criterion 5f:", line.detail, "|", dips.detail)
    assert line.passed
    assert not dips.asserted and dips.detail


@pytest.mark.parametrize("phi", [0.5, 1.0, 1.5])
def test_criterion_5g_mirror_symmetry(phi):
    x = ProbeGrid().values()
    _, a = spectrum_arrays(REFERENCE_PARAMS.replace(delta_c=0.5, delta_m=phi), x)
    _, b = spectrum_arrays(REFERENCE_PARAMS.replace(delta_c=-0.5, delta_m=-phi), x)
    mismatch, _ = mirror_mismatch(x, a.imag, b.imag)
    assert mismatch < 0.05


def test_criterion_6_group_index_sign_patterns():
    t0 = time.perf_counter()
    results = {fig_id: _claims(fig_id)["group-index sign pattern"] for fig_id in ("fig4a", "fig4b", "fig6b", "fig10c")}
    elapsed = time.perf_counter() - t0
    for fig_id, claim in results.items():
        print(f"criterion 6 {fig_id}: {claim.label} ({claim.detail})")
    assert elapsed < 60.0
    assert all(c.passed for c in results.values()), [k for k, c in results.items() if not c.passed]


def test_criterion_7_differentiation_integrity():
    ids = [k for k in FIGURES if k.startswith(("fig4", "fig6", "fig10")) and FIGURES[k].spec.quantity == "group_index"]
    failing = []
    for fig_id in ids:
        claim = _claims(fig_id)["Richardson vs dense-grid secant"]
        print(f"criterion 7 {fig_id}: {claim.label} ({claim.detail})")
        if not claim.passed:
            failing.append(fig_id)
    assert not failing, failing
