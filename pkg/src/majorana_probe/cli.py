"""Command-line front end.

Every subcommand reads an optional JSON config, applies flag overrides and
writes its outputs into ``--out``. Exit codes: 0 ok, 2 invalid input,
3 solver failure, 4 I/O failure, 5 a figure claim failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import tempfile
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .dynamics import EQ3_VARIANTS
from .exceptions import MajoranaProbeError, ParameterError, SolverError
from .figures import FIGURES, figure
from .oracle import ORACLE_DELTAS, oracle_comparison
from .params import GroupIndexScale, ModelParams, ProbeGrid, params_from_dict, validate_params
from .plotting import write_plot_script, write_svg
from .response import (
    DEFAULT_EQ10_VARIANT,
    EQ10_VARIANTS,
    PATHS,
    divergence_report,
    group_index,
    spectrum,
    write_spectrum_csv,
)
from .steady import stationary_residuals, steady_state
from .sweep import SweepSpec, run_sweep

EXIT_OK, EXIT_INVALID, EXIT_SOLVER, EXIT_IO, EXIT_CLAIM = 0, 2, 3, 4, 5

_GRID_FIELDS = ("delta_s_min", "delta_s_max", "n_points")
_CONFIG_KEYS = {"params", "grid", "path", "out", "workers", "variant_eq3", "variant_eq10",
                "scale_pi", "sweep", "oracle"}


@dataclass
class RunConfig:
    params: ModelParams = field(default_factory=ModelParams)
    grid: ProbeGrid = field(default_factory=ProbeGrid)
    path: str = "linear_system"
    out: Path = Path(".")
    workers: int = 1
    variant_eq3: str = "symmetrized"
    variant_eq10: str = DEFAULT_EQ10_VARIANT
    scale_pi: float = 1.0
    sweep: dict | None = None
    oracle: dict = field(default_factory=dict)

    @property
    def variants(self) -> dict[str, str]:
        return {"eq3_variant": self.variant_eq3, "eq10_variant": self.variant_eq10}

    def validate(self) -> None:
        validate_params(self.params).raise_if_invalid()
        if self.path not in PATHS + ("both",):
            raise ParameterError(f"unknown path {self.path!r}")
        if self.variant_eq3 not in EQ3_VARIANTS:
            raise ParameterError(f"unknown variant-eq3 {self.variant_eq3!r}")
        if self.variant_eq10 not in EQ10_VARIANTS:
            raise ParameterError(f"unknown variant-eq10 {self.variant_eq10!r}")
        if not isinstance(self.workers, int) or self.workers < 1:
            raise ParameterError("workers must be an integer ≥ 1")

    def provenance(self) -> dict[str, Any]:
        return {
            "params": self.params.to_dict(),
            "grid": asdict(self.grid),
            "path": self.path,
            "variant_eq3": self.variant_eq3,
            "variant_eq10": self.variant_eq10,
        }


def _load_config(path: str | None) -> dict[str, Any]:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParameterError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ParameterError("config must be a JSON object")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise ParameterError(f"unknown config key(s): {sorted(unknown)}")
    return data


def build_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the config file, then explicit flags."""
    data = _load_config(getattr(args, "config", None))
    flags = vars(args)
    params = dict(data.get("params", {}))
    params.update({k: flags[k] for k in ModelParams.field_names() if flags.get(k) is not None})
    grid = {**asdict(ProbeGrid()), **data.get("grid", {})}
    unknown_grid = set(grid) - set(_GRID_FIELDS)
    if unknown_grid:
        raise ParameterError(f"unknown grid key(s): {sorted(unknown_grid)}")
    grid.update({k: flags[k] for k in _GRID_FIELDS if flags.get(k) is not None})

    def pick(name, default):
        return flags[name] if flags.get(name) is not None else data.get(name, default)

    try:
        probe_grid = ProbeGrid(float(grid["delta_s_min"]), float(grid["delta_s_max"]), int(grid["n_points"]))
    except (TypeError, ValueError) as exc:
        raise ParameterError(str(exc)) from None
    cfg = RunConfig(
        params=params_from_dict(params),
        grid=probe_grid,
        path=pick("path", "linear_system"),
        out=Path(pick("out", ".")),
        workers=pick("workers", 1),
        variant_eq3=pick("variant_eq3", "symmetrized"),
        variant_eq10=pick("variant_eq10", DEFAULT_EQ10_VARIANT),
        scale_pi=float(pick("scale_pi", 1.0)),
        sweep=data.get("sweep"),
        oracle=dict(data.get("oracle", {})),
    )
    cfg.validate()
    return cfg


def _prepare_out(out: Path) -> Path:
    """Create ``out`` and prove it is writable before any computation."""
    out.mkdir(parents=True, exist_ok=True)
    fd, probe = tempfile.mkstemp(dir=out, prefix=".write-test-")
    os.close(fd)
    os.unlink(probe)
    return out


def _dump(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _complex(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


# subcommands ----------------------------------------------------------------


def cmd_steady(cfg: RunConfig, args: argparse.Namespace) -> int:
    ss = steady_state(cfg.params)
    res = stationary_residuals(cfg.params, ss, variant=cfg.variant_eq3)
    payload = {
        "params": cfg.params.to_dict(),
        "w0": ss.w0,
        "s0": _complex(ss.s0),
        "f0": _complex(ss.f0),
        "cubic_residual": ss.residual,
        "stationary_residuals": [abs(r) for r in res],
        "n_admissible": ss.n_admissible,
        "bistable": ss.bistable,
        "roots": [_complex(complex(r)) for r in ss.roots],
    }
    text = _dump(payload)
    (cfg.out / "steady.json").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig, args: argparse.Namespace) -> int:
    paths = PATHS if cfg.path == "both" else (cfg.path,)
    for path in paths:
        points = spectrum(cfg.params, cfg.grid, path, **cfg.variants)
        csv_path = write_spectrum_csv(points, cfg.out / f"spectrum_{path}.csv")
        write_plot_script(csv_path)
        write_svg(cfg.out / f"spectrum_{path}.svg", [pt.delta_s for pt in points],
                  [pt.chi for pt in points], title=f"chi(1), {path}")
        print(f"wrote {csv_path}")
    if cfg.path == "both":
        report = divergence_report({"run": cfg.params}, cfg.grid)
        (cfg.out / "divergence_report.json").write_text(_dump(report.to_dict()))
        selected = report.selected()
        print(f"closed form vs linear system, selected variant pair: {selected}")
    (cfg.out / "spectrum.json").write_text(_dump(cfg.provenance()))
    return EXIT_OK


def cmd_group_index(cfg: RunConfig, args: argparse.Namespace) -> int:
    path = "linear_system" if cfg.path == "both" else cfg.path
    g = group_index(cfg.params, GroupIndexScale(cfg.scale_pi), path=path, **cfg.variants)
    payload = {
        "params": cfg.params.to_dict(),
        "path": path,
        "ng_over_pi": g.ng_over_pi,
        "ng": g.ng,
        "scale_pi": g.scale_pi,
        "regime": g.regime,
        "derivative_estimate": g.derivative_estimate,
        "step_used": g.step_used,
        "richardson_error": g.richardson_error,
    }
    text = _dump(payload)
    (cfg.out / "group_index.json").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def _sweep_spec(cfg: RunConfig, args: argparse.Namespace) -> SweepSpec:
    if args.spec is not None:
        try:
            data = json.loads(Path(args.spec).read_text())
        except json.JSONDecodeError as exc:
            raise ParameterError(f"sweep spec is not valid JSON: {exc}") from None
    elif cfg.sweep is not None:
        data = dict(cfg.sweep)
    else:
        raise ParameterError("sweep needs --spec or a 'sweep' object in the config")
    if not isinstance(data, dict):
        raise ParameterError("sweep spec must be a JSON object")
    data.setdefault("base", cfg.params.to_dict())
    data.setdefault("grid", asdict(cfg.grid))
    if cfg.path != "both":
        data.setdefault("path", cfg.path)
    data.setdefault("eq3_variant", cfg.variant_eq3)
    data.setdefault("eq10_variant", cfg.variant_eq10)
    data.setdefault("scale_pi", cfg.scale_pi)
    return SweepSpec.from_dict(data)


def cmd_sweep(cfg: RunConfig, args: argparse.Namespace) -> int:
    spec = _sweep_spec(cfg, args)
    result = run_sweep(spec, workers=cfg.workers)
    result.write_csv(cfg.out / "sweep.csv")
    result.write_sidecar(cfg.out / "sweep.json")
    failed = sum(not c.ok for c in result.cells)
    print(f"wrote {cfg.out / 'sweep.csv'} ({len(result.cells)} cells, {failed} failed)")
    return EXIT_OK


def cmd_figure(cfg: RunConfig, args: argparse.Namespace) -> int:
    report = figure(args.id, workers=cfg.workers)
    report.result.write_csv(cfg.out / f"{args.id}.csv")
    report.result.write_sidecar(cfg.out / f"{args.id}.json")
    table = report.table()
    (cfg.out / f"{args.id}_claims.txt").write_text(table + "\n")
    print(table)
    return EXIT_OK if report.passed else EXIT_CLAIM


def cmd_oracle_check(cfg: RunConfig, args: argparse.Namespace) -> int:
    deltas = args.deltas if args.deltas else cfg.oracle.pop("deltas", ORACLE_DELTAS)
    options = {k: v for k, v in cfg.oracle.items() if k != "deltas"}
    for name in ("n_periods", "probe_rabi"):
        if getattr(args, name) is not None:
            options[name] = getattr(args, name)
    unknown = set(options) - {"n_periods", "probe_rabi", "t_transient", "dt_max"}
    if unknown:
        raise ParameterError(f"unknown oracle option(s): {sorted(unknown)}")
    rows = oracle_comparison(cfg.params, deltas, workers=cfg.workers, **options)
    target = cfg.out / "oracle_check.csv"
    with target.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["delta_ghz", "re_chi_analytic", "im_chi_analytic", "re_chi_oracle", "im_chi_oracle", "rel_err"])
        for r in rows:
            a, o = r["chi_analytic"], r["chi_oracle"]
            w.writerow([repr(r["delta_ghz"]), repr(a.real), repr(a.imag), repr(o.real), repr(o.imag),
                        repr(r["rel_err"])])
    worst = max(r["rel_err"] for r in rows)
    print(f"wrote {target}; max rel_err = {worst:.3e}")
    return EXIT_OK


COMMANDS = {
    "steady": cmd_steady,
    "spectrum": cmd_spectrum,
    "group-index": cmd_group_index,
    "sweep": cmd_sweep,
    "figure": cmd_figure,
    "oracle-check": cmd_oracle_check,
}


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("run options")
    g.add_argument("--config", help="JSON config file; flags override its fields")
    g.add_argument("--out", help="output directory (default: current directory)")
    g.add_argument("--workers", type=int, help="worker processes for sweeps and oracle checks")
    g.add_argument("--path", choices=PATHS + ("both",))
    g.add_argument("--variant-eq3", dest="variant_eq3", choices=EQ3_VARIANTS)
    g.add_argument("--variant-eq10", dest="variant_eq10", choices=EQ10_VARIANTS)
    g.add_argument("--scale_pi", type=float, help="Pi factor converting ng/Pi into ng")
    m = common.add_argument_group("model parameters (GHz)")
    for name in ModelParams.field_names():
        m.add_argument(f"--{name}", type=float)
    pg = common.add_argument_group("probe grid")
    pg.add_argument("--delta_s_min", type=float)
    pg.add_argument("--delta_s_max", type=float)
    pg.add_argument("--n_points", type=int)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="majorana-probe", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("steady", parents=[common], help="steady state as JSON")
    sub.add_parser("spectrum", parents=[common], help="probe spectrum CSV plus plot script")
    sub.add_parser("group-index", parents=[common], help="group-velocity index at the exciton line")
    sp = sub.add_parser("sweep", parents=[common], help="one- or two-axis parameter sweep")
    sp.add_argument("--spec", help="sweep spec JSON file")
    fp = sub.add_parser("figure", parents=[common], help="run a frozen figure recipe and check its claims")
    fp.add_argument("id", choices=sorted(FIGURES))
    op = sub.add_parser("oracle-check", parents=[common], help="time-domain oracle vs linear response")
    op.add_argument("--deltas", type=float, nargs="+", help="beat frequencies delta (GHz)")
    op.add_argument("--n_periods", type=int)
    op.add_argument("--probe_rabi", type=float)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
    except (ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        _prepare_out(cfg.out)
    except OSError as exc:
        print(f"error: output directory {cfg.out} is not writable: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        return COMMANDS[args.command](cfg, args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (SolverError, ArithmeticError, MajoranaProbeError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
