"""Trajectory and report files.

A trajectory is a CSV with header ``t,x,re,im,abs2`` (one row per snapshot
and grid point, 17 significant digits) plus a JSON sidecar with the same stem
holding the grid, run configuration, coefficients and scheme parameters.
"""

from __future__ import annotations

import json
import os
from contextlib import contextmanager
from pathlib import Path

import numpy as np

from .errors import SchemaError, SolitonError
from .fields import Grid, Trajectory

HEADER = "t,x,re,im,abs2"
LOCK_NAME = ".spinsoliton.lock"


def _jsonable(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, tuple)):
        return list(obj)
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


def dump_json(data, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True, default=_jsonable)
        fh.write("\n")


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".json")


def write_trajectory(traj: Trajectory, path) -> Path:
    path = Path(path)
    n_t, n_x = traj.values.shape
    t = np.repeat(traj.times, n_x)
    x = np.tile(traj.grid.x, n_t)
    v = traj.values.ravel()
    re, im = v.real, v.imag
    table = np.column_stack([t, x, re, im, re * re + im * im])
    np.savetxt(path, table, fmt="%.17g", delimiter=",", header=HEADER, comments="")
    meta = dict(traj.meta)
    meta["grid"] = traj.grid.to_dict()
    meta["snapshot_times"] = traj.times
    meta["format"] = {"columns": HEADER.split(","), "digits": 17}
    dump_json(meta, sidecar_path(path))
    return path


def read_trajectory(path) -> Trajectory:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
    if header != HEADER:
        raise SchemaError(f"{path}: expected header {HEADER!r}, found {header!r}")
    side = sidecar_path(path)
    if not side.exists():
        raise SchemaError(f"{path}: missing metadata sidecar {side.name}")
    meta = json.loads(side.read_text(encoding="utf-8"))
    try:
        g = meta["grid"]
        grid = Grid(int(g["n_points"]), float(g["x_min"]), float(g["x_max"]), g["bc"],
                    min_points=min(3, int(g["n_points"])))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"{side}: malformed grid block ({exc})") from exc
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != 5 or data.shape[0] % grid.n_points:
        raise SchemaError(f"{path}: {data.shape} does not match a grid of {grid.n_points}")
    n_t = data.shape[0] // grid.n_points
    data = data.reshape(n_t, grid.n_points, 5)
    times = data[:, 0, 0]
    values = data[:, :, 2] + 1j * data[:, :, 3]
    return Trajectory(times, values, grid, meta)


def write_heatmap(traj: Trajectory, path) -> Path:
    """Grayscale binary PGM of ``|phi(x, t)|``: one row per snapshot."""
    mod = np.abs(traj.values)
    peak = mod.max()
    img = np.zeros_like(mod) if peak == 0 else mod / peak
    pixels = np.round(img * 255).astype(np.uint8)
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{pixels.shape[1]} {pixels.shape[0]}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())
    return path


@contextmanager
def output_lock(directory):
    """Claim ``directory`` for one writer; a second concurrent claim fails."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    lock = directory / LOCK_NAME
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise SolitonError(f"{directory} is in use by another run ({lock} exists)") from None
    try:
        os.write(fd, str(os.getpid()).encode())
        os.close(fd)
        yield directory
    finally:
        lock.unlink(missing_ok=True)


def write_report(report, out_dir, heatmaps: bool = False) -> Path:
    with output_lock(out_dir) as d:
        for name, traj in report.trajectories.items():
            write_trajectory(traj, d / f"{name}.csv")
            if heatmaps:
                write_heatmap(traj, d / f"{name}.pgm")
        path = d / "report.json"
        dump_json(report.to_dict(), path)
    return path
