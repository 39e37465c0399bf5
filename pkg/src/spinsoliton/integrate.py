"""Classical RK4 and a snapshot-aligned time marcher for small systems."""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import NumericBlowupError, ParameterError

DEFAULT_CEILING = 1e6


def rk4_step(f: Callable, t: float, y: np.ndarray, h: float) -> np.ndarray:
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def check_finite(y: np.ndarray, t: float, ceiling: float = DEFAULT_CEILING) -> None:
    mag = np.abs(y)
    bad = ~np.isfinite(mag) | (mag > ceiling)
    if bad.any():
        i = int(np.argmax(bad))
        raise NumericBlowupError(
            f"amplitude blow-up at t={t:.6g}, index {i} (|y| = {mag[i]:.3g})", time=t, index=i)


def segment_steps(t_from: float, t_to: float, dt: float) -> list[float]:
    """Step sizes covering [t_from, t_to]: whole ``dt`` steps, then one shorter
    step so the segment ends exactly on ``t_to``."""
    span = t_to - t_from
    if span <= 0:
        return []
    n = int(math.floor(span / dt + 1e-9))
    steps = [dt] * n
    rest = span - n * dt
    if rest > 1e-9 * dt:
        steps.append(rest)
    return steps


def check_snapshots(snapshot_times: Sequence[float], t_end: float) -> np.ndarray:
    times = np.asarray(sorted(float(s) for s in snapshot_times), dtype=float)
    if times.size == 0:
        raise ParameterError("at least one snapshot time is required", key="snapshots")
    if times[0] < 0 or times[-1] > t_end * (1 + 1e-12):
        raise ParameterError("snapshot times must lie in [0, t_end]", key="snapshots")
    if np.any(np.diff(times) <= 0):
        raise ParameterError("snapshot times must be distinct", key="snapshots")
    return times
