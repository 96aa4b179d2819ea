import csv

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import linearised_chi
from majorana_probe import (
    ModelParams,
    ParameterError,
    ProbeGrid,
    chi1,
    chi1_closed_form,
    chi1_linear_system,
    divergence_report,
    group_index,
    spectrum,
    steady_state,
)
from majorana_probe.response import (
    EQ10_VARIANTS,
    _sideband_system,
    secant_derivative,
    spectrum_arrays,
    write_spectrum_csv,
)


def _exact_derivative(p, delta):
    # dM/d delta = i I, so du/d delta = -i M^-1 u
    ss = steady_state(p)
    M, r = _sideband_system(p, ss, np.array([delta]), "symmetrized")
    u = np.linalg.solve(M[0], r)
    du = np.linalg.solve(M[0], -1j * u)
    return (p.gamma2 * du[0]).real


@pytest.mark.parametrize("dc,dm", [(0, 0), (0.5, 0), (0, -0.5), (0.5, -0.5), (-1.0, 1.5)])
def test_linear_system_matches_numerical_linearisation(ref, dc, dm):
    p = ref.replace(delta_c=dc, delta_m=dm)
    delta = np.linspace(-2, 2, 41) + dc
    ref = linearised_chi(p, delta)
    assert np.max(np.abs(chi1(p, delta) - ref)) / np.max(np.abs(ref)) < 1e-8


def test_two_level_lorentzian():
    p = ModelParams(beta1=0, beta2=0, omega_c_rabi_sq=0, delta_c=0.3)
    d = np.linspace(-3, 3, 201)
    expected = 1j * p.gamma2 / (p.gamma2 + 1j * (p.delta_c - d))
    for path in ("linear_system", "closed_form"):
        assert np.max(np.abs(chi1(p, d, path=path) - expected)) < 1e-12


def test_closed_form_conjugate_variant_agrees(ref):
    for dc, dm in [(0, 0), (0.5, -0.5), (1.0, 0.5)]:
        p = ref.replace(delta_c=dc, delta_m=dm)
        ss = steady_state(p)
        for d in (-0.7, 0.01, 0.33):
            a = chi1_linear_system(p, ss, d)
            b = chi1_closed_form(p, ss, d)
            assert abs(a - b) / max(1, abs(a)) < 1e-12


def test_printed_auxiliaries_diverge(ref):
    report = divergence_report({"ref": ref.replace(delta_c=0.5, delta_m=-0.5)}, ProbeGrid(-2, 2, 401))
    errs = report.by_variant()
    assert report.selected() == ("symmetrized", "conjugate")
    assert errs[("symmetrized", "eps1")] > 1e-3
    assert errs[("symmetrized", "eps2")] > 1e-3
    assert set(v for _, v in errs) == set(EQ10_VARIANTS)
    d = report.to_dict()
    assert d["selected"] == ("symmetrized", "conjugate")
    assert len(d["rows"]) == 6


@settings(max_examples=40, deadline=None)
@given(dc=st.floats(-1.5, 1.5), dm=st.floats(-1.5, 1.5), d=st.floats(-2, 2))
def test_mirror_symmetry(dc, dm, d):
    p = ModelParams(delta_c=dc, delta_m=dm)
    q = p.replace(delta_c=-dc, delta_m=-dm)
    a = chi1(p, d)
    b = chi1(q, -d)
    assert abs(a + np.conj(b)) <= 1e-9 * max(1.0, abs(a))


def test_vectorised_equals_pointwise(ref):
    d = np.linspace(-1, 1, 11)
    vec = chi1(ref, d)
    assert vec.shape == d.shape
    for x, v in zip(d, vec):
        assert chi1(ref, x) == v


def test_unknown_path_and_variant(ref):
    with pytest.raises(ParameterError):
        chi1(ref, 0.1, path="magic")
    with pytest.raises(ParameterError):
        chi1(ref, 0.1, eq3_variant="other")
    with pytest.raises(ParameterError):
        chi1(ref, 0.1, path="closed_form", eq10_variant="eps3")


def test_spectrum_order_and_csv(tmp_path, ref):
    grid = ProbeGrid(-1, 1, 5)
    pts = spectrum(ref, grid)
    assert [pt.delta_s for pt in pts] == list(grid.values())
    path = write_spectrum_csv(pts, tmp_path / "s.csv")
    raw = path.read_bytes()
    assert b"\r" not in raw
    rows = list(csv.reader(raw.decode().splitlines()))
    assert rows[0] == ["delta_s_ghz", "re_chi", "im_chi"]
    assert len(rows) == 6
    assert complex(float(rows[3][1]), float(rows[3][2])) == pts[2].chi
    assert pts[2].absorption == pts[2].chi.imag
    assert pts[2].dispersion == pts[2].chi.real


def test_spectrum_is_deterministic(ref):
    a = spectrum_arrays(ref, ProbeGrid())
    b = spectrum_arrays(ref, ProbeGrid())
    assert np.array_equal(a[1], b[1])


def test_two_point_grid(ref):
    assert len(spectrum(ref, ProbeGrid(-0.1, 0.1, 2))) == 2


@pytest.mark.parametrize("b1,b2,dc", [(0.05, 0.05, 0.0), (0.005, 0.0, 0.0), (0.1, 0.2, 0.5), (0.05, 0.1, 1.0)])
def test_richardson_matches_exact_derivative(ref, b1, b2, dc):
    p = ref.replace(beta1=b1, beta2=b2, delta_c=dc)
    g = group_index(p)
    exact = _exact_derivative(p, p.delta_c)
    assert g.derivative_estimate == pytest.approx(exact, rel=1e-7, abs=1e-9)
    assert g.ng_over_pi == pytest.approx(p.gamma2 * g.derivative_estimate)


def test_group_index_two_level_value():
    # Re chi = G (dc - delta) / (G^2 + (dc - delta)^2): slope -1 / G on the line,
    # anomalous dispersion of a bare absorber
    p = ModelParams(beta1=0, beta2=0, omega_c_rabi_sq=0)
    g = group_index(p)
    assert g.derivative_estimate == pytest.approx(-1 / p.gamma2, rel=1e-9)
    assert g.ng_over_pi == pytest.approx(-1.0, rel=1e-9)
    assert g.regime == "fast"


def test_group_index_scale(ref):
    from majorana_probe import GroupIndexScale

    g = group_index(ref, GroupIndexScale(3.0))
    assert g.ng == pytest.approx(3.0 * g.ng_over_pi)


def test_secant_converges_to_richardson(ref):
    g = group_index(ref)
    assert secant_derivative(ref, step=1e-5) == pytest.approx(g.derivative_estimate, rel=1e-6)
