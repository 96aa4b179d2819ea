"""Geometric features of absorption spectra.

Peaks and dips are local extrema of Im chi whose prominence exceeds a fraction
of the spectrum's height range, so that numerical ripple is not reported.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.signal import find_peaks

from .exceptions import FeatureError
from .response import SusceptibilityPoint

__all__ = ["Extremum", "SpectrumFeatures", "detect_features", "mirror_mismatch", "half_height_width"]

DEFAULT_REL_PROMINENCE = 0.01


@dataclass(frozen=True)
class Extremum:
    position: float
    height: float
    fwhm: float | None = None
    prominence: float = 0.0


@dataclass(frozen=True)
class SpectrumFeatures:
    peaks: tuple[Extremum, ...]
    dips: tuple[Extremum, ...]
    deepest_dip: Extremum | None
    splitting: float | None
    asymmetry: float | None

    @property
    def tallest(self) -> Extremum:
        return max(self.peaks, key=lambda e: e.height)

    def dip_near(self, position: float, tol: float) -> Extremum | None:
        near = [d for d in self.dips if abs(d.position - position) <= tol]
        return min(near, key=lambda d: d.height) if near else None


def half_height_width(x: np.ndarray, y: np.ndarray, i: int) -> float | None:
    """Full width at half of ``y[i]`` by linear interpolation of the crossings."""
    half = y[i] / 2
    left = right = None
    j = i
    while j > 0 and y[j] > half:
        j -= 1
    if y[j] <= half:
        left = x[j] + (half - y[j]) * (x[j + 1] - x[j]) / (y[j + 1] - y[j])
    j = i
    while j < len(y) - 1 and y[j] > half:
        j += 1
    if y[j] <= half:
        right = x[j - 1] + (half - y[j - 1]) * (x[j] - x[j - 1]) / (y[j] - y[j - 1])
    if left is None or right is None:
        return None
    return float(right - left)


def _as_arrays(spec) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(spec, tuple) and len(spec) == 2:
        x, y = spec
        return np.asarray(x, dtype=float), np.asarray(y)
    x = np.array([pt.delta_s for pt in spec], dtype=float)
    y = np.array([pt.chi for pt in spec])
    return x, y


def detect_features(
    spec: Sequence[SusceptibilityPoint] | tuple[np.ndarray, np.ndarray],
    rel_prominence: float = DEFAULT_REL_PROMINENCE,
) -> SpectrumFeatures:
    """Peaks, dips, splitting and asymmetry of the absorption Im chi.

    ``spec`` is a list of points or a ``(delta_s, chi)`` pair (``chi`` may
    already be the real absorption). The asymmetry of the two tallest peaks is
    (h_left - h_right) / (h_left + h_right); splitting is their distance.
    """
    x, chi = _as_arrays(spec)
    if len(x) < 16:
        raise FeatureError("need at least 16 points")
    if np.any(np.diff(x) <= 0):
        raise FeatureError("delta_s must be strictly ascending")
    y = np.imag(chi) if np.iscomplexobj(chi) else np.asarray(chi, dtype=float)
    prom = rel_prominence * float(np.ptp(y)) if np.ptp(y) > 0 else 0.0

    ip, pprops = find_peaks(y, prominence=prom)
    if ip.size == 0:
        # a monotone spectrum still has a maximum at an edge; not a resonance
        raise FeatureError("no absorption peak found")
    peaks = tuple(
        Extremum(float(x[i]), float(y[i]), half_height_width(x, y, i), float(pr))
        for i, pr in zip(ip, pprops["prominences"])
    )
    idn, dprops = find_peaks(-y, prominence=prom)
    dips = tuple(Extremum(float(x[i]), float(y[i]), None, float(pr)) for i, pr in zip(idn, dprops["prominences"]))
    deepest = min(dips, key=lambda d: d.height) if dips else None

    splitting = asymmetry = None
    if len(peaks) >= 2:
        two = sorted(sorted(peaks, key=lambda e: e.height)[-2:], key=lambda e: e.position)
        splitting = two[1].position - two[0].position
        h_l, h_r = two[0].height, two[1].height
        asymmetry = (h_l - h_r) / (h_l + h_r)
    return SpectrumFeatures(peaks, dips, deepest, splitting, asymmetry)


def mirror_mismatch(x: np.ndarray, y1: np.ndarray, y2: np.ndarray) -> tuple[float, float]:
    """Compare ``y1(x)`` with the mirrored ``y2(-x + s0)``.

    ``x`` must be a uniform grid symmetric about zero. The offset ``s0`` is
    the cross-correlation maximiser (a whole number of grid steps). Returns
    ``(mismatch, s0)`` with mismatch = ||y1 - y2_mirrored|| / ||y1|| over the
    overlapping samples.
    """
    x = np.asarray(x, dtype=float)
    y1 = np.asarray(y1, dtype=float)
    mirrored = np.asarray(y2, dtype=float)[::-1]
    if not np.allclose(x, -x[::-1], atol=1e-12 * max(1.0, np.abs(x).max())):
        raise ValueError("grid must be symmetric about zero")
    n = len(x)
    corr = np.correlate(y1 - y1.mean(), mirrored - mirrored.mean(), mode="full")
    lag = int(np.argmax(corr)) - (n - 1)
    # y1[i] ~ mirrored[i - lag]
    if lag >= 0:
        a, b = y1[lag:], mirrored[: n - lag]
    else:
        a, b = y1[: n + lag], mirrored[-lag:]
    step = x[1] - x[0]
    mismatch = float(np.linalg.norm(a - b) / np.linalg.norm(a))
    return mismatch, lag * step
