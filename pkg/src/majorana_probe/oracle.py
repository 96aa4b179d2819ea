"""Brute-force time-domain check of the linear susceptibility.

The mean-field equations are integrated with an explicit weak probe; the
component of <S^-> oscillating as e^{-i delta t} is projected out over whole
beat periods and normalised like the linear-response result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import solve_ivp

from .dynamics import check_eq3_variant, mean_field_rhs
from .exceptions import IntegrationError, ParameterError
from .params import ModelParams, validate_params
from .steady import SteadyState, steady_state

__all__ = [
    "OracleConfig",
    "Trajectory",
    "OracleResult",
    "integrate_mean_field",
    "demodulate_sideband",
    "oracle_chi",
    "slowest_decay_rate",
    "oracle_comparison",
    "ORACLE_DELTAS",
]

SAMPLES_PER_PERIOD = 32
RTOL = 1e-10
ATOL = 1e-12
SETTLE_EFOLDS = 25
MAX_TRANSIENT = 2e4


def slowest_decay_rate(p: ModelParams, ss: SteadyState | None = None) -> float:
    """Slowest relaxation rate of the probe-off dynamics about the fixed point.

    Uses a finite-difference Jacobian of the real form of the equations.
    """
    ss = ss or steady_state(p)
    y0 = np.array([ss.w0 / 2, 0.0, ss.s0.real, ss.s0.imag, ss.f0.real, ss.f0.imag])

    def real_rhs(y):
        dz, ds, df = mean_field_rhs(p, complex(y[0], y[1]), complex(y[2], y[3]), complex(y[4], y[5]))
        return np.array([dz.real, dz.imag, ds.real, ds.imag, df.real, df.imag])

    h = 1e-7
    jac = np.empty((6, 6))
    for k in range(6):
        e = np.zeros(6)
        e[k] = h
        jac[:, k] = (real_rhs(y0 + e) - real_rhs(y0 - e)) / (2 * h)
    return float(-np.max(np.linalg.eigvals(jac).real))


@dataclass(frozen=True)
class OracleConfig:
    """Probe drive and time windows (GHz, ns).

    Left as ``None``: ``probe_rabi`` is 1e-3 max(gamma2, |delta|, Omega_c);
    ``t_transient`` is the longer of 20 / min(gamma1, gamma2) and
    ``SETTLE_EFOLDS`` e-folds of the slowest relaxation (capped at
    ``MAX_TRANSIENT``); ``dt_max`` is an eighth of the beat period.
    """

    delta: float
    probe_rabi: float | None = None
    t_transient: float | None = None
    n_periods: int = 20
    dt_max: float | None = None

    @property
    def period(self) -> float:
        if not math.isfinite(self.delta) or abs(self.delta) < 1e-3:
            raise ParameterError("|delta| must be ≥ 1e-3 GHz for the time-domain oracle")
        return 2 * math.pi / abs(self.delta)

    def resolved(self, p: ModelParams) -> "OracleConfig":
        probe = self.probe_rabi
        if probe is None:
            probe = 1e-3 * max(p.gamma2, abs(self.delta), p.omega_c)
        t_tr = self.t_transient
        if t_tr is None:
            t_tr = 20 / min(p.gamma1, p.gamma2)
            rate = slowest_decay_rate(p)
            if rate > 0:
                t_tr = min(max(t_tr, SETTLE_EFOLDS / rate), MAX_TRANSIENT)
        dt = self.dt_max if self.dt_max is not None else self.period / 8
        return replace(self, probe_rabi=probe, t_transient=t_tr, dt_max=dt)

    def validate(self, p: ModelParams, allow_zero_probe: bool = False) -> None:
        if not math.isfinite(self.delta) or abs(self.delta) < 1e-3:
            raise ParameterError("|delta| must be ≥ 1e-3 GHz for the time-domain oracle")
        if isinstance(self.n_periods, bool) or int(self.n_periods) != self.n_periods:
            raise ParameterError("n_periods must be a whole number of beat periods")
        if self.n_periods < 20:
            raise ParameterError("n_periods must be ≥ 20")
        if self.n_periods % 2:
            raise ParameterError("n_periods must be even (two half-windows are compared)")
        limit = 1e-3 * max(p.gamma2, abs(self.delta), p.omega_c)
        probe = self.probe_rabi
        if probe is None or probe < 0 or (probe == 0 and not allow_zero_probe):
            raise ParameterError("probe_rabi must be > 0")
        if probe > limit * (1 + 1e-12):
            raise ParameterError(f"probe_rabi must be ≤ {limit:g} GHz to stay in the linear regime")
        if self.t_transient is None or self.t_transient < 0:
            raise ParameterError("t_transient must be ≥ 0")
        if self.dt_max is None or not self.dt_max > 0:
            raise ParameterError("dt_max must be > 0")


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    sz: np.ndarray
    sm: np.ndarray
    f: np.ndarray

    def max_imag_sz(self) -> float:
        return float(np.max(np.abs(self.sz.imag)))


@dataclass(frozen=True)
class OracleResult:
    chi: complex
    half_window_rel_diff: float
    second_harmonic_ratio: float
    config: OracleConfig

    @property
    def settled(self) -> bool:
        return self.half_window_rel_diff < 2e-3


def integrate_mean_field(
    p: ModelParams,
    cfg: OracleConfig,
    *,
    eq3_variant: str = "symmetrized",
    initial: str | tuple[complex, complex, complex] = "ground",
    allow_zero_probe: bool = False,
) -> Trajectory:
    """Integrate (<S^z>, <S^->, <f>) through the transient and demodulation window.

    ``initial`` is ``"ground"`` (-1/2, 0, 0), ``"steady"`` (the probe-off
    fixed point) or an explicit triple. Samples are uniform over the
    demodulation window with ``SAMPLES_PER_PERIOD`` points per beat period.
    """
    validate_params(p).raise_if_invalid()
    check_eq3_variant(eq3_variant)
    cfg = cfg.resolved(p)
    cfg.validate(p, allow_zero_probe=allow_zero_probe)

    if initial == "ground":
        y0 = np.array([-0.5, 0, 0], dtype=complex)
    elif initial == "steady":
        ss = steady_state(p)
        y0 = np.array([ss.w0 / 2, ss.s0, ss.f0], dtype=complex)
    else:
        y0 = np.asarray(initial, dtype=complex)

    probe, delta = cfg.probe_rabi, cfg.delta

    def rhs(t, y):
        drive = probe * np.exp(-1j * delta * t)
        return np.array(mean_field_rhs(p, y[0], y[1], y[2], drive, eq3_variant))

    n_samples = SAMPLES_PER_PERIOD * int(cfg.n_periods)
    t_end = cfg.t_transient + cfg.n_periods * cfg.period
    t_eval = cfg.t_transient + np.arange(n_samples + 1) * (cfg.period / SAMPLES_PER_PERIOD)
    t_eval[-1] = t_end
    sol = solve_ivp(
        rhs,
        (0.0, t_end),
        y0,
        method="DOP853",
        t_eval=t_eval,
        rtol=RTOL,
        atol=ATOL,
        max_step=cfg.dt_max,
    )
    if sol.status != 0:
        raise IntegrationError(f"integration failed: {sol.message}", t=float(sol.t[-1]) if sol.t.size else 0.0)
    if not np.all(np.isfinite(sol.y)):
        raise IntegrationError("state diverged to NaN/inf")
    return Trajectory(times=sol.t, sz=sol.y[0], sm=sol.y[1], f=sol.y[2])


def _window(traj: Trajectory, cfg: OracleConfig) -> tuple[np.ndarray, np.ndarray]:
    n_samples = SAMPLES_PER_PERIOD * int(cfg.n_periods)
    t_end = cfg.t_transient + cfg.n_periods * cfg.period
    if traj.times[0] > cfg.t_transient + 1e-9 or traj.times[-1] < t_end * (1 - 1e-12):
        raise ParameterError("trajectory does not cover the demodulation window")
    start = int(np.searchsorted(traj.times, cfg.t_transient - 1e-9))
    sel = slice(start, start + n_samples)
    return traj.times[sel], traj.sm[sel]


def _project(t: np.ndarray, x: np.ndarray, freq: float) -> complex:
    # rectangle rule over whole periods: exact for the low harmonics present
    return complex(np.mean(x * np.exp(1j * freq * t)))


def demodulate_sideband(
    traj: Trajectory, cfg: OracleConfig, p: ModelParams, ss: SteadyState | None = None
) -> complex:
    """chi estimate Gamma2 * S_+ / probe_rabi from a trajectory."""
    cfg = cfg.resolved(p)
    if isinstance(cfg.n_periods, bool) or int(cfg.n_periods) != cfg.n_periods:
        raise ParameterError("demodulation window must span a whole number of beat periods")
    ss = ss or steady_state(p)
    t, sm = _window(traj, cfg)
    s_plus = _project(t, sm - ss.s0, cfg.delta)
    if cfg.probe_rabi == 0:
        return s_plus * p.gamma2
    return p.gamma2 * s_plus / cfg.probe_rabi


def oracle_chi(
    p: ModelParams,
    cfg: OracleConfig,
    *,
    eq3_variant: str = "symmetrized",
    initial: str = "ground",
) -> OracleResult:
    """Integrate and demodulate, with settling and harmonic diagnostics."""
    cfg = cfg.resolved(p)
    ss = steady_state(p)
    traj = integrate_mean_field(p, cfg, eq3_variant=eq3_variant, initial=initial)
    chi = demodulate_sideband(traj, cfg, p, ss)
    t, sm = _window(traj, cfg)
    half = len(t) // 2
    first = _project(t[:half], sm[:half] - ss.s0, cfg.delta)
    second = _project(t[half:], sm[half:] - ss.s0, cfg.delta)
    rel = abs(first - second) / max(abs(second), 1e-300)
    fundamental = abs(_project(t, sm - ss.s0, cfg.delta))
    harmonic = abs(_project(t, sm - ss.s0, 2 * cfg.delta))
    return OracleResult(
        chi=chi,
        half_window_rel_diff=float(rel),
        second_harmonic_ratio=harmonic / max(fundamental, 1e-300),
        config=cfg,
    )


# 21 beat frequencies across the symmetric doublet at zero detunings; none within 1e-3 of zero.
ORACLE_DELTAS = tuple(float(v) for v in np.round(np.linspace(-0.39, 0.41, 21), 12))


def _oracle_point(args):
    p, delta, kwargs = args
    return oracle_chi(p, OracleConfig(delta=delta, **kwargs))


def oracle_comparison(
    p: ModelParams,
    deltas=ORACLE_DELTAS,
    *,
    workers: int = 1,
    **config,
) -> list[dict]:
    """Oracle vs linear-system chi over a set of beat frequencies.

    ``rel_err`` is |chi_oracle - chi_analytic| / max over the set of |chi_analytic|.
    """
    from concurrent.futures import ProcessPoolExecutor

    from .response import chi1

    ss = steady_state(p)
    analytic = np.asarray(chi1(p, np.asarray(deltas, dtype=float), ss=ss), dtype=complex)
    jobs = [(p, float(d), config) for d in deltas]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_oracle_point, jobs))
    else:
        results = [_oracle_point(j) for j in jobs]
    scale = float(np.max(np.abs(analytic)))
    rows = []
    for d, a, r in zip(deltas, analytic, results):
        rows.append(
            {
                "delta_ghz": float(d),
                "chi_analytic": complex(a),
                "chi_oracle": r.chi,
                "rel_err": float(abs(r.chi - a) / scale),
                "settled": r.settled,
                "second_harmonic_ratio": r.second_harmonic_ratio,
            }
        )
    return rows
