"""Grid, field snapshot and trajectory containers shared by the solvers."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import GridMismatchError, ParameterError

MIN_POINTS = 16


class Boundary(str, Enum):
    PERIODIC = "periodic"
    FIXED = "fixed"

    @classmethod
    def parse(cls, value) -> "Boundary":
        if isinstance(value, Boundary):
            return value
        key = str(value).strip().lower()
        aliases = {"periodic": cls.PERIODIC, "fixed": cls.FIXED, "fixedends": cls.FIXED,
                   "fixed_ends": cls.FIXED}
        try:
            return aliases[key]
        except KeyError:
            raise ParameterError(f"unknown boundary condition {value!r}", key="bc") from None


@dataclass(frozen=True)
class Grid:
    """Uniform 1-D grid in lattice-constant units.

    Periodic grids exclude the right endpoint (it coincides with ``x_min``);
    fixed-end grids include both endpoints.
    """

    n_points: int
    x_min: float
    x_max: float
    bc: Boundary = Boundary.PERIODIC
    min_points: int = field(default=MIN_POINTS, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "bc", Boundary.parse(self.bc))
        if int(self.n_points) != self.n_points or self.n_points < self.min_points:
            raise ParameterError(f"n_points must be an integer >= {self.min_points}",
                                 key="n_points")
        object.__setattr__(self, "n_points", int(self.n_points))
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)):
            raise ParameterError("grid bounds must be finite", key="x_min")
        if self.x_max <= self.x_min:
            raise ParameterError("x_max must exceed x_min", key="x_max")

    @property
    def periodic(self) -> bool:
        return self.bc is Boundary.PERIODIC

    @property
    def dx(self) -> float:
        span = self.x_max - self.x_min
        return span / self.n_points if self.periodic else span / (self.n_points - 1)

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_points)

    def scaled(self, factor: float) -> "Grid":
        return Grid(self.n_points, self.x_min * factor, self.x_max * factor, self.bc,
                    min_points=self.min_points)

    @classmethod
    def lattice(cls, n_sites: int, bc=Boundary.PERIODIC, first_site: float = 0.0) -> "Grid":
        """Integer-spaced grid holding one point per chain site."""
        bc = Boundary.parse(bc)
        last = first_site + (n_sites if bc is Boundary.PERIODIC else n_sites - 1)
        return cls(n_sites, first_site, last, bc, min_points=3)

    def to_dict(self) -> dict:
        return {"n_points": self.n_points, "x_min": self.x_min, "x_max": self.x_max,
                "bc": self.bc.value, "dx": self.dx}


@dataclass(frozen=True)
class Field:
    values: np.ndarray
    grid: Grid
    time: float = 0.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.n_points,):
            raise GridMismatchError(
                f"field has shape {values.shape}, grid expects ({self.grid.n_points},)")
        if not np.all(np.isfinite(values)):
            raise ParameterError("field contains non-finite samples", key="values")
        object.__setattr__(self, "values", values)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    @property
    def modulus(self) -> np.ndarray:
        return np.abs(self.values)


@dataclass
class Trajectory:
    """Snapshots of one run on a single grid plus run metadata."""

    times: np.ndarray
    values: np.ndarray  # shape (n_snapshots, n_points)
    grid: Grid
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.ndim != 2 or self.values.shape != (self.times.size, self.grid.n_points):
            raise GridMismatchError("snapshot array does not match times/grid")
        if self.times.size and np.any(np.diff(self.times) <= 0):
            raise ParameterError("snapshot times must be strictly increasing", key="snapshots")

    def __len__(self):
        return self.times.size

    def __getitem__(self, i) -> Field:
        return Field(self.values[i], self.grid, float(self.times[i]))

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    @property
    def final(self) -> Field:
        return self[-1]

    def at(self, t: float, tol: float = 1e-9) -> Field:
        i = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[i] - t) > tol * max(1.0, abs(t)):
            raise KeyError(f"no snapshot at t={t}")
        return self[i]

    def until(self, t: float) -> "Trajectory":
        keep = self.times <= t * (1 + 1e-12) + 1e-12
        return Trajectory(self.times[keep], self.values[keep], self.grid, dict(self.meta))
