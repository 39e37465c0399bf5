"""Closed-form bright/dark solitons, the magic-angle plane wave, and the
gauge map between the lab frame and the slowly varying envelope frame."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, asdict
from enum import Enum

import numpy as np

from .errors import ParameterError, RegimeMismatchError
from .fields import Field
from .model import LINEAR_TOL, Coefficients, ModelParams


class SolitonKind(str, Enum):
    BRIGHT = "bright"
    DARK = "dark"


class Direction(str, Enum):
    TO_LAB = "to_lab"
    TO_ENVELOPE = "to_envelope"


class NonlinearRegimeWarning(RuntimeWarning):
    """Plane wave requested where the cubic term does not vanish."""


@dataclass(frozen=True)
class SolitonParams:
    A: float = 1.0
    v1: float = 5.0
    x0: float = 0.0

    def __post_init__(self):
        for name in ("A", "v1", "x0"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite", key=name)
        if self.A <= 0:
            raise ParameterError("soliton amplitude A must be positive", key="A")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class Kinematics:
    v: float
    gamma: float
    omega: float
    width: float

    def to_dict(self) -> dict:
        return asdict(self)


def _require_sign(coeffs: Coefficients, kind: SolitonKind) -> None:
    if kind is SolitonKind.BRIGHT and not coeffs.c1 > 0:
        raise RegimeMismatchError(f"bright soliton needs c1 > 0 (c1 = {coeffs.c1:.6g})")
    if kind is SolitonKind.DARK and not coeffs.c1 < 0:
        raise RegimeMismatchError(f"dark soliton needs c1 < 0 (c1 = {coeffs.c1:.6g})")


def soliton_kinematics(coeffs: Coefficients, params: ModelParams, sp: SolitonParams,
                       kind) -> Kinematics:
    """Velocity, carrier wavenumber/frequency and width of a single soliton.

    The width is the scale on which the sech/tanh argument changes by one.
    """
    kind = SolitonKind(kind)
    _require_sign(coeffs, kind)
    hbar, S = params.hbar, params.S
    c0S = coeffs.c0 * S
    v = sp.v1 * math.sqrt(c0S / hbar)
    gamma = hbar * v / (2.0 * c0S)
    kinetic = hbar * v * v / (4.0 * c0S)
    if kind is SolitonKind.BRIGHT:
        omega = coeffs.c1 * (2.0 * S - sp.A**2) / hbar + params.B / hbar + kinetic
        width = math.sqrt(c0S / coeffs.c1) / sp.A
    else:
        omega = 2.0 * coeffs.c1 * (S - sp.A**2) / hbar + params.B / hbar + kinetic
        width = math.sqrt(c0S / -coeffs.c1) / sp.A
    return Kinematics(v=v, gamma=gamma, omega=omega, width=width)


def bright_soliton(coeffs, params, sp, x, t):
    """Sech-envelope solution of the constant-potential NLS (requires c1 > 0)."""
    k = soliton_kinematics(coeffs, params, sp, SolitonKind.BRIGHT)
    x = np.asarray(x, dtype=float)
    u = (x - sp.x0 - k.v * t) / k.width
    return sp.A * np.exp(1j * (k.gamma * x - k.omega * t)) / np.cosh(u)


def dark_soliton(coeffs, params, sp, x, t):
    """Tanh dip on a uniform background (requires c1 < 0)."""
    k = soliton_kinematics(coeffs, params, sp, SolitonKind.DARK)
    x = np.asarray(x, dtype=float)
    u = (x - sp.x0 - k.v * t) / k.width
    return sp.A * np.exp(1j * (k.gamma * x - k.omega * t)) * np.tanh(u)


def soliton(coeffs, params, sp, kind, x, t):
    kind = SolitonKind(kind)
    fn = bright_soliton if kind is SolitonKind.BRIGHT else dark_soliton
    return fn(coeffs, params, sp, x, t)


def plane_wave_frequency(coeffs: Coefficients, params: ModelParams, k: float) -> float:
    return (coeffs.c0 * params.S * k * k + coeffs.V) / params.hbar


def plane_wave(coeffs, params, k, A, x, t):
    """``A exp(i(kx - Omega t))`` with the linear (c1 = 0) dispersion.

    Outside the magic angle this is not a solution; a
    :class:`NonlinearRegimeWarning` is emitted in that case.
    """
    if abs(coeffs.c1) > LINEAR_TOL * params.J:
        warnings.warn(f"c1 = {coeffs.c1:.3g} != 0: plane wave ignores the cubic term",
                      NonlinearRegimeWarning, stacklevel=2)
    omega = plane_wave_frequency(coeffs, params, k)
    x = np.asarray(x, dtype=float)
    return A * np.exp(1j * (k * x - omega * t))


def xi_scale(coeffs: Coefficients, params: ModelParams) -> float:
    """Factor mapping lab coordinate x to envelope coordinate xi."""
    return math.sqrt(params.hbar / (coeffs.c0 * params.S))


def gauge_transform(field: Field, coeffs: Coefficients, params: ModelParams, t: float,
                    direction) -> Field:
    """Remove (``TO_ENVELOPE``) or restore (``TO_LAB``) the constant-potential
    rotation ``exp(-i chi t)`` and rescale the coordinate between x and xi."""
    direction = Direction(direction)
    scale = xi_scale(coeffs, params)
    if direction is Direction.TO_LAB:
        values = field.values * np.exp(-1j * coeffs.chi * t)
        grid = field.grid.scaled(1.0 / scale)
    else:
        values = field.values * np.exp(1j * coeffs.chi * t)
        grid = field.grid.scaled(scale)
    return Field(values, grid, field.time)
