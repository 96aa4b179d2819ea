import numpy as np
import pytest

from majorana_probe import REFERENCE_PARAMS


@pytest.fixture
def ref():
    return REFERENCE_PARAMS


@pytest.fixture
def fig2a():
    return REFERENCE_PARAMS.replace(delta_c=0.0, delta_m=0.0, beta1=0.05, beta2=0.05)


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion at the end of the run."""
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when == "call" and "test_acceptance.py" in rep.nodeid:
                name = rep.nodeid.split("::", 1)[1].removeprefix("test_")
                lines.append((name, "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, label in sorted(lines):
            terminalreporter.write_line(f"{label}  {name}")


def linearised_chi(p, delta, variant="symmetrized", h=1e-6):
    """Reference chi from a numerical linearisation of the mean-field equations.

    Works in real coordinates (sz, Re s, Im s, Re f, Im f); the probe forcing
    is read off the right-hand side, so nothing of the sideband matrix is reused.
    """
    from majorana_probe.dynamics import mean_field_rhs
    from majorana_probe.steady import steady_state

    ss = steady_state(p)

    def rhs(y, probe=0.0):
        dz, ds, df = mean_field_rhs(p, y[0], y[1] + 1j * y[2], y[3] + 1j * y[4], probe, variant)
        return np.array([np.real(dz), ds.real, ds.imag, df.real, df.imag])

    y0 = np.array([ss.w0 / 2, ss.s0.real, ss.s0.imag, ss.f0.real, ss.f0.imag])
    A = np.empty((5, 5))
    for k in range(5):
        e = np.zeros(5)
        e[k] = h
        A[:, k] = (rhs(y0 + e) - rhs(y0 - e)) / (2 * h)
    base = rhs(y0)
    g_re = rhs(y0, 1.0) - base
    g_im = rhs(y0, 1j) - base
    forcing = (g_re - 1j * g_im) / 2
    out = []
    for d in np.atleast_1d(delta):
        Y = np.linalg.solve(-1j * d * np.eye(5) - A, forcing)
        out.append(p.gamma2 * (Y[1] + 1j * Y[2]))
    return np.array(out)
