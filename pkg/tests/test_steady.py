import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from majorana_probe import ModelParams, ParameterError, SolverError, cubic_coefficients, steady_state
from majorana_probe.steady import cubic_residual, solve_population_inversion, stationary_residuals


def _bisect_cubic(p, lo=-1.0, hi=0.0, n=200):
    c = cubic_coefficients(p)
    f = lambda w: np.polyval(c, w)
    flo = f(lo)
    for _ in range(n):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_cubic_coefficients_by_hand(ref):
    # A = b1^2 + b2^2, B = gamma2 kappa, D = kappa^2 / 4, C = gamma2^2 D at zero detuning
    A, B, D = 0.005, 1.5e-5, 2.5e-9
    C = 0.0225 * D
    assert C == pytest.approx(5.625e-11)
    c3, c2, c1, c0 = cubic_coefficients(ref)
    g1 = 0.3
    assert c3 == pytest.approx(g1 * A**2, rel=1e-12)
    assert c2 == pytest.approx(g1 * A * (A - B), rel=1e-12)
    assert c1 == pytest.approx(g1 * (C - A * B) + 4 * 0.005 * 0.15 * D, rel=1e-12)
    assert c0 == pytest.approx(g1 * C, rel=1e-12)


def test_two_level_saturation():
    p = ModelParams(beta1=0.0, beta2=0.0)
    assert steady_state(p).w0 == pytest.approx(-1 / (1 + 0.003 / 0.00675), abs=1e-13)
    assert steady_state(p).w0 == pytest.approx(-0.6923076923, abs=1e-10)


def test_pump_off_is_ground_state():
    ss = steady_state(ModelParams(omega_c_rabi_sq=0.0))
    assert ss.w0 == -1.0 and ss.s0 == 0 and ss.f0 == 0


def test_blocked_pump_at_reference_values(ref):
    # With the Majorana line on resonance the pump is almost fully blocked.
    ss = steady_state(ref)
    assert -1 < ss.w0 < -1 + 1e-5
    # leading order in the small inversion deficit: f0 = i b Omega / |b|^2
    expected_f0 = 1j * ref.coupling * ref.omega_c / 0.005
    assert abs(ss.f0 - expected_f0) < 2e-3
    assert abs(abs(ss.f0) - 1) < 2e-3


def test_matches_bisection_on_reference_grid(ref):
    for dc in (-1.0, 0.0, 0.5):
        for dm in (-0.5, 0.0, 1.0):
            p = ref.replace(delta_c=dc, delta_m=dm)
            ss = steady_state(p)
            if ss.n_admissible == 1:
                assert ss.w0 == pytest.approx(_bisect_cubic(p), abs=1e-12)


def test_residuals_small(ref):
    ss = steady_state(ref)
    assert cubic_residual(ref, ss.w0) < 1e-15
    assert max(abs(r) for r in stationary_residuals(ref, ss)) < 1e-14


def test_invalid_params_raise():
    with pytest.raises(ParameterError):
        steady_state(ModelParams(gamma1=0.0))


def test_bistable_branch_is_reported():
    # Strong pump far off resonance gives three admissible roots.
    p = ModelParams(gamma1=1e-3, gamma2=1e-3, kappa_m=1e-3, beta1=0.3, beta2=0.0,
                    delta_c=-1.0, delta_m=0.0, omega_c_rabi_sq=0.02)
    ss = solve_population_inversion(p)
    assert ss.n_admissible >= 1
    assert ss.bistable == (ss.n_admissible > 1)
    assert -1 <= ss.w0 <= 0


def test_solver_error_carries_diagnostics():
    err = SolverError("x", roots=[1])
    assert err.diagnostics["roots"] == [1]


rates = st.floats(1e-4, 1.0)


@settings(max_examples=200, deadline=None)
@given(g1=rates, g2=rates, km=rates, b1=st.floats(0, 1), b2=st.floats(0, 1),
       dc=st.floats(-2, 2), dm=st.floats(-2, 2), om=st.floats(0, 0.02))
def test_random_parameters_admissible(g1, g2, km, b1, b2, dc, dm, om):
    p = ModelParams(dc, dm, b1, b2, g1, g2, km, om)
    ss = steady_state(p)
    assert -1 <= ss.w0 <= 0
    assert cubic_residual(p, ss.w0) < 1e-10
    assert max(abs(r) for r in stationary_residuals(p, ss)) < 1e-10


@settings(max_examples=50, deadline=None)
@given(dc=st.floats(-2, 2), dm=st.floats(-2, 2))
def test_mirror_symmetry_of_steady_state(dc, dm):
    ref = ModelParams()
    a = steady_state(ref.replace(delta_c=dc, delta_m=dm))
    b = steady_state(ref.replace(delta_c=-dc, delta_m=-dm))
    assert a.w0 == pytest.approx(b.w0, abs=1e-12)
