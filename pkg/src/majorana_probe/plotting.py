"""Static plot output: a matplotlib script next to the CSV plus a bare SVG."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np

_SCRIPT = '''"""Plot {csv_name}: absorption (Im chi) and dispersion (Re chi) vs delta_s."""
import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = Path(__file__).resolve().parent
rows = list(csv.DictReader((here / "{csv_name}").open()))
x = [float(r["delta_s_ghz"]) for r in rows]
fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(6, 6))
ax1.plot(x, [float(r["im_chi"]) for r in rows])
ax1.set_ylabel("Im chi (absorption)")
ax2.plot(x, [float(r["re_chi"]) for r in rows])
ax2.set_ylabel("Re chi (dispersion)")
ax2.set_xlabel("probe detuning delta_s (GHz)")
fig.tight_layout()
fig.savefig(here / "{png_name}", dpi=150)
'''


def write_plot_script(csv_path: str | Path, script_path: str | Path | None = None) -> Path:
    csv_path = Path(csv_path)
    script_path = Path(script_path) if script_path else csv_path.with_name(f"plot_{csv_path.stem}.py")
    script_path.write_text(_SCRIPT.format(csv_name=csv_path.name, png_name=f"{csv_path.stem}.png"))
    return script_path


def _polyline(x: np.ndarray, y: np.ndarray, box: tuple[float, float, float, float], color: str) -> str:
    x0, y0, w, h = box
    xs = (x - x.min()) / (np.ptp(x) or 1.0) * w + x0
    span = np.ptp(y) or 1.0
    ys = y0 + h - (y - y.min()) / span * h
    pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(xs, ys))
    return f'<polyline fill="none" stroke="{color}" stroke-width="1" points="{pts}"/>'


def write_svg(path: str | Path, x: Sequence[float], chi: Sequence[complex], title: str = "") -> Path:
    """Two stacked panels, Im chi on top and Re chi below, no axes library needed."""
    x = np.asarray(x, dtype=float)
    chi = np.asarray(chi, dtype=complex)
    width, height, pad = 640, 480, 40
    panel = (height - 3 * pad) / 2
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<text x="{pad}" y="{pad / 2 + 5}" font-size="12">{title}</text>',
        f'<text x="{pad}" y="{pad + 12}" font-size="10">Im chi</text>',
        _polyline(x, chi.imag, (pad, pad, width - 2 * pad, panel), "#1f77b4"),
        f'<text x="{pad}" y="{2 * pad + panel + 12}" font-size="10">Re chi</text>',
        _polyline(x, chi.real, (pad, 2 * pad + panel, width - 2 * pad, panel), "#d62728"),
        f'<text x="{width / 2 - 60}" y="{height - 8}" font-size="10">'
        f"delta_s {x.min():g} .. {x.max():g} GHz</text>",
        "</svg>",
    ]
    path = Path(path)
    path.write_text("\n".join(parts) + "\n")
    return path
