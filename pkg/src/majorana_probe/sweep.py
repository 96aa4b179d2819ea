"""Declarative parameter sweeps.

A sweep varies one or two axes over a base parameter set and evaluates a
spectrum, a group index or a steady state in every cell. Cells are
independent; results always come back in row-major order (axis1 outer).
"""

from __future__ import annotations

import csv
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .dynamics import EQ3_VARIANTS
from .exceptions import MajoranaProbeError, ParameterError
from .params import GroupIndexScale, ModelParams, ProbeGrid, params_from_dict, validate_params
from .response import (
    DEFAULT_EQ10_VARIANT,
    EQ10_VARIANTS,
    PATHS,
    GroupIndexResult,
    group_index,
    spectrum_arrays,
)
from .steady import SteadyState, steady_state

__all__ = ["Axis", "SweepSpec", "Cell", "SweepResult", "run_sweep", "QUANTITIES"]

QUANTITIES = ("spectrum", "group_index", "steady_state")


@dataclass(frozen=True)
class Axis:
    """One sweep axis.

    ``field`` names a ``ModelParams`` field, or a tuple of fields varied
    together, in which case every value is a tuple of the same length.
    """

    field: str | tuple[str, ...]
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(self.values))
        if isinstance(self.field, list):
            object.__setattr__(self, "field", tuple(self.field))

    @property
    def fields(self) -> tuple[str, ...]:
        return (self.field,) if isinstance(self.field, str) else tuple(self.field)

    def assignments(self) -> list[dict[str, float]]:
        out = []
        for v in self.values:
            vals = v if isinstance(v, (tuple, list)) else (v,)
            out.append({k: float(x) for k, x in zip(self.fields, vals)})
        return out

    def validate(self) -> None:
        known = ModelParams.field_names()
        for name in self.fields:
            if name not in known:
                raise ParameterError(f"unknown sweep axis field {name!r}")
        if len(self.values) < 1:
            raise ParameterError("sweep axis needs at least one value")
        for v in self.values:
            vals = v if isinstance(v, (tuple, list)) else (v,)
            if len(vals) != len(self.fields):
                raise ParameterError(f"axis value {v!r} does not match fields {self.fields}")
            if not all(isinstance(x, (int, float)) and math.isfinite(x) for x in vals):
                raise ParameterError(f"axis value {v!r} is not finite")

    def to_dict(self) -> dict:
        return {"field": list(self.fields) if len(self.fields) > 1 else self.fields[0],
                "values": [list(v) if isinstance(v, tuple) else v for v in self.values]}


@dataclass(frozen=True)
class SweepSpec:
    base: ModelParams
    quantity: str
    axis1: Axis
    axis2: Axis | None = None
    grid: ProbeGrid = field(default_factory=ProbeGrid)
    path: str = "linear_system"
    eq3_variant: str = "symmetrized"
    eq10_variant: str = DEFAULT_EQ10_VARIANT
    scale_pi: float = 1.0

    @property
    def axes(self) -> tuple[Axis, ...]:
        return (self.axis1,) if self.axis2 is None else (self.axis1, self.axis2)

    def validate(self) -> None:
        validate_params(self.base).raise_if_invalid()
        if self.quantity not in QUANTITIES:
            raise ParameterError(f"unknown quantity {self.quantity!r}; expected one of {QUANTITIES}")
        if self.path not in PATHS:
            raise ParameterError(f"unknown path {self.path!r}")
        if self.eq3_variant not in EQ3_VARIANTS or self.eq10_variant not in EQ10_VARIANTS:
            raise ParameterError("unknown formula variant")
        for axis in self.axes:
            axis.validate()
        fields = [f for a in self.axes for f in a.fields]
        if len(set(fields)) != len(fields):
            raise ParameterError("a field appears on more than one axis")

    def cells(self) -> list[tuple[tuple[int, ...], ModelParams]]:
        per_axis = [list(enumerate(a.assignments())) for a in self.axes]
        out = []
        for combo in itertools.product(*per_axis):
            index = tuple(i for i, _ in combo)
            changes: dict[str, float] = {}
            for _, assignment in combo:
                changes.update(assignment)
            out.append((index, self.base.replace(**changes)))
        return out

    def to_dict(self) -> dict:
        return {
            "base": self.base.to_dict(),
            "quantity": self.quantity,
            "axis1": self.axis1.to_dict(),
            "axis2": self.axis2.to_dict() if self.axis2 else None,
            "grid": asdict(self.grid),
            "path": self.path,
            "eq3_variant": self.eq3_variant,
            "eq10_variant": self.eq10_variant,
            "scale_pi": self.scale_pi,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SweepSpec":
        known = {"base", "quantity", "axis1", "axis2", "grid", "path", "eq3_variant", "eq10_variant", "scale_pi"}
        unknown = set(data) - known
        if unknown:
            raise ParameterError(f"unknown sweep spec key(s): {sorted(unknown)}")
        if "axis1" not in data or "quantity" not in data:
            raise ParameterError("sweep spec needs 'quantity' and 'axis1'")

        def axis(d):
            if d is None:
                return None
            if not isinstance(d, dict) or set(d) != {"field", "values"}:
                raise ParameterError("axis must be an object with 'field' and 'values'")
            fld = d["field"]
            vals = [tuple(v) if isinstance(v, list) else v for v in d["values"]]
            return Axis(tuple(fld) if isinstance(fld, list) else fld, tuple(vals))

        spec = cls(
            base=params_from_dict(data.get("base", {})),
            quantity=data["quantity"],
            axis1=axis(data["axis1"]),
            axis2=axis(data.get("axis2")),
            grid=ProbeGrid(**data["grid"]) if data.get("grid") else ProbeGrid(),
            path=data.get("path", "linear_system"),
            eq3_variant=data.get("eq3_variant", "symmetrized"),
            eq10_variant=data.get("eq10_variant", DEFAULT_EQ10_VARIANT),
            scale_pi=float(data.get("scale_pi", 1.0)),
        )
        spec.validate()
        return spec


@dataclass(frozen=True)
class Cell:
    index: tuple[int, ...]
    params: ModelParams
    value: Any = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class SweepResult:
    spec: SweepSpec
    cells: list[Cell]

    def values(self) -> list[Any]:
        return [c.value for c in self.cells]

    def ok(self) -> bool:
        return all(c.ok for c in self.cells)

    def axis_values(self, cell: Cell) -> list[float]:
        out = []
        for axis in self.spec.axes:
            out.extend(getattr(cell.params, f) for f in axis.fields)
        return out

    def axis_columns(self) -> list[str]:
        return [f for axis in self.spec.axes for f in axis.fields]

    def write_csv(self, path: str | Path) -> Path:
        path = Path(path)
        cols = self.axis_columns()
        q = self.spec.quantity
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            if q == "spectrum":
                w.writerow(cols + ["delta_s_ghz", "re_chi", "im_chi", "status"])
            elif q == "group_index":
                w.writerow(cols + ["ng_over_pi", "ng", "derivative_estimate", "step_used", "richardson_error", "status"])
            else:
                w.writerow(cols + ["w0", "re_s0", "im_s0", "re_f0", "im_f0", "residual", "n_admissible", "status"])
            for cell in self.cells:
                lead = [repr(float(v)) for v in self.axis_values(cell)]
                status = "ok" if cell.ok else f"error: {cell.error}"
                if not cell.ok:
                    w.writerow(lead + [""] * (3 if q == "spectrum" else 5 if q == "group_index" else 7) + [status])
                elif q == "spectrum":
                    x, chi = cell.value
                    for a, c in zip(x, chi):
                        w.writerow(lead + [repr(float(a)), repr(float(c.real)), repr(float(c.imag)), status])
                elif q == "group_index":
                    g: GroupIndexResult = cell.value
                    w.writerow(lead + [repr(float(v)) for v in
                                       (g.ng_over_pi, g.ng, g.derivative_estimate, g.step_used, g.richardson_error)]
                               + [status])
                else:
                    s: SteadyState = cell.value
                    w.writerow(lead + [repr(float(v)) for v in
                                       (s.w0, s.s0.real, s.s0.imag, s.f0.real, s.f0.imag, s.residual)]
                               + [str(s.n_admissible), status])
        return path

    def write_sidecar(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(json.dumps(self.spec.to_dict(), indent=2, sort_keys=True) + "\n")
        return path


def _evaluate(spec: SweepSpec, index: tuple[int, ...], p: ModelParams) -> Cell:
    try:
        if spec.quantity == "spectrum":
            value = spectrum_arrays(p, spec.grid, spec.path,
                                    eq3_variant=spec.eq3_variant, eq10_variant=spec.eq10_variant)
        elif spec.quantity == "group_index":
            value = group_index(p, GroupIndexScale(spec.scale_pi), path=spec.path,
                                eq3_variant=spec.eq3_variant, eq10_variant=spec.eq10_variant)
        else:
            value = steady_state(p)
    except (MajoranaProbeError, ArithmeticError, ValueError) as exc:
        return Cell(index, p, None, f"{type(exc).__name__}: {exc}")
    return Cell(index, p, value)


def _evaluate_packed(args):
    return _evaluate(*args)


def run_sweep(spec: SweepSpec, workers: int = 1) -> SweepResult:
    """Evaluate every cell of ``spec``; a failing cell records its error."""
    spec.validate()
    if workers < 1:
        raise ParameterError("workers must be ≥ 1")
    jobs = [(spec, index, p) for index, p in spec.cells()]
    if workers == 1 or len(jobs) == 1:
        cells = [_evaluate_packed(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            cells = list(pool.map(_evaluate_packed, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    return SweepResult(spec, cells)
