"""Diagnostics on fields and trajectories.

Everything here compares moduli, so results do not depend on the fast
carrier phase or on a global phase rotation.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict
from enum import Enum
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import DegenerateProfileError, GridMismatchError, InsufficientPointsError
from .fields import Field, Trajectory


class Feature(str, Enum):
    PEAK = "peak"
    DIP = "dip"


class TrackPoint(NamedTuple):
    t: float
    position: float
    amplitude: float


@dataclass
class SolitonDiagnostics:
    peak_position: float
    peak_amplitude: float
    fwhm: float
    center_of_mass: float
    velocity_estimate: float
    shape_retention_error: float

    def to_dict(self) -> dict:
        return asdict(self)


def _same_grid(a: Field, b: Field) -> None:
    if a.grid != b.grid:
        raise GridMismatchError("fields live on different grids")


def l2_deviation(a: Field, b: Field) -> float:
    _same_grid(a, b)
    d = np.abs(a.values) - np.abs(b.values)
    return float(np.sqrt(np.sum(d * d) * a.grid.dx))


def l2_norm(f: Field) -> float:
    return float(np.sqrt(np.sum(np.abs(f.values) ** 2) * f.grid.dx))


def linf_deviation(a: Field, b: Field) -> float:
    _same_grid(a, b)
    return float(np.max(np.abs(np.abs(a.values) - np.abs(b.values))))


def locate(field: Field, kind=Feature.PEAK) -> tuple[float, float]:
    """Position and modulus of the extremum of ``|phi|``.

    The extremum is refined with a parabola through three samples of
    ``|phi|^2`` (smooth at both sech peaks and tanh zeros). Ties go to the
    smaller x.
    """
    kind = Feature(kind)
    y = np.abs(field.values) ** 2
    if y.max() - y.min() < 1e-12:
        raise DegenerateProfileError("profile is constant; no peak or dip to track")
    i = int(np.argmax(y) if kind is Feature.PEAK else np.argmin(y))
    grid = field.grid
    n = grid.n_points
    x = grid.x[i]
    value = y[i]
    if grid.periodic or 0 < i < n - 1:
        ym, yp = y[(i - 1) % n], y[(i + 1) % n]
        curv = ym - 2.0 * y[i] + yp
        if curv != 0.0:
            off = 0.5 * (ym - yp) / curv
            if abs(off) <= 1.0:
                x = x + off * grid.dx
                value = y[i] - 0.25 * (ym - yp) * off
    if grid.periodic:
        x = grid.x_min + (x - grid.x_min) % grid.length
    return float(x), float(np.sqrt(max(value, 0.0)))


def track_peak(traj: Trajectory, kind=Feature.PEAK) -> list[TrackPoint]:
    if len(traj) == 0:
        raise InsufficientPointsError("empty trajectory")
    out = []
    for f in traj:
        pos, amp = locate(f, kind)
        out.append(TrackPoint(f.time, pos, amp))
    return out


def estimate_velocity(track: Sequence) -> float:
    """Least-squares slope of position against time."""
    if len(track) < 3:
        raise InsufficientPointsError("need at least 3 track points for a velocity")
    t = np.array([p[0] for p in track], dtype=float)
    x = np.array([p[1] for p in track], dtype=float)
    tc = t - t.mean()
    spread = np.dot(tc, tc)
    if not spread > 0:
        raise InsufficientPointsError("track times do not span a resolvable interval")
    return float(np.dot(tc, x - x.mean()) / spread)


def _half_crossings(y: np.ndarray, x: np.ndarray, i: int, level: float) -> float:
    """Width between the two linear-interpolated crossings of ``level``
    around the maximum at index ``i``."""
    n = y.size
    j = i
    while j > 0 and y[j - 1] > level:
        j -= 1
    k = i
    while k < n - 1 and y[k + 1] > level:
        k += 1
    if j == 0 or k == n - 1:
        return float("nan")
    left = x[j - 1] + (level - y[j - 1]) * (x[j] - x[j - 1]) / (y[j] - y[j - 1])
    right = x[k] + (level - y[k]) * (x[k + 1] - x[k]) / (y[k + 1] - y[k])
    return float(right - left)


def fwhm(field: Field, kind=Feature.PEAK, background: float | None = None) -> float:
    """Full width at half maximum of ``|phi|^2`` (peaks) or of
    ``background^2 - |phi|^2`` (dips)."""
    kind = Feature(kind)
    a2 = np.abs(field.values) ** 2
    if kind is Feature.DIP:
        bg = np.max(np.abs(field.values)) if background is None else background
        y = bg * bg - a2
    else:
        y = a2
    i = int(np.argmax(y))
    return _half_crossings(y, field.x, i, 0.5 * y[i])


def center_of_mass(field: Field, kind=Feature.PEAK, background: float | None = None) -> float:
    a2 = np.abs(field.values) ** 2
    if Feature(kind) is Feature.DIP:
        bg = np.max(np.abs(field.values)) if background is None else background
        w = np.clip(bg * bg - a2, 0.0, None)
    else:
        w = a2
    total = w.sum()
    if total == 0:
        raise DegenerateProfileError("zero weight; centre of mass undefined")
    return float(np.dot(field.x, w) / total)


def _relative(field: Field, center: float) -> np.ndarray:
    rel = field.x - center
    if field.grid.periodic:
        L = field.grid.length
        rel = (rel + 0.5 * L) % L - 0.5 * L
    return rel


def shape_retention(traj: Trajectory, reference: Callable[[np.ndarray], np.ndarray],
                    kind=Feature.PEAK) -> float:
    """Normalised L2 distance between the final ``|phi|`` and ``reference``
    re-centred on the tracked peak or dip.

    ``reference`` maps displacement from the centre to the expected modulus.
    """
    final = traj.final
    center, _ = locate(final, kind)
    ref = np.abs(reference(_relative(final, center)))
    d = np.abs(final.values) - ref
    num = np.sqrt(np.sum(d * d))
    den = np.sqrt(np.sum(ref * ref))
    return float(num / den)


def count_oscillations(values: np.ndarray, threshold: float) -> int:
    """Number of turning points in ``values`` whose swing exceeds ``threshold``
    (zig-zag counting, so roundoff wiggles are ignored)."""
    y = np.asarray(values, dtype=float)
    if y.size < 3:
        return 0
    turns = 0
    direction = 0
    pivot = y[0]
    for v in y[1:]:
        if direction >= 0 and v < pivot - threshold:
            if direction > 0:
                turns += 1
            direction = -1
            pivot = v
        elif direction <= 0 and v > pivot + threshold:
            if direction < 0:
                turns += 1
            direction = 1
            pivot = v
        elif (direction > 0 and v > pivot) or (direction < 0 and v < pivot):
            pivot = v
    return turns


def oscillations_outside(field: Field, center: float, exclude: float, threshold: float) -> int:
    """Turning points of ``|phi|`` counted separately on each side of
    ``center``, skipping ``|x - center| < exclude``."""
    rel = _relative(field, center)
    mod = np.abs(field.values)
    order = np.argsort(rel)
    rel, mod = rel[order], mod[order]
    left = mod[rel <= -exclude]
    right = mod[rel >= exclude]
    return count_oscillations(left, threshold) + count_oscillations(right, threshold)


def diagnose(traj: Trajectory, kind=Feature.PEAK, reference=None,
             background: float | None = None) -> SolitonDiagnostics:
    kind = Feature(kind)
    track = track_peak(traj, kind)
    final = traj.final
    velocity = estimate_velocity(track) if len(track) >= 3 else float("nan")
    retention = shape_retention(traj, reference, kind) if reference is not None else float("nan")
    return SolitonDiagnostics(
        peak_position=track[-1].position,
        peak_amplitude=track[-1].amplitude,
        fwhm=fwhm(final, kind, background),
        center_of_mass=center_of_mass(final, kind, background),
        velocity_estimate=velocity,
        shape_retention_error=retention,
    )
