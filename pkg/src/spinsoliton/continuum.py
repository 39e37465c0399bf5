"""Method-of-lines integration of the continuum envelope equations.

Space is discretised with the second-order central stencil, time with
classical RK4. Three equations are available:

``nls``
    ``i hbar phi_t + c0 S phi_xx + 2 c1 |phi|^2 phi = V phi``
``full``
    the same plus the ``c2``/``c3`` source, conjugate and cubic terms left
    over from the rank-one and rank-two parts of the exchange
``envelope``
    the standard NLS ``i phi_t + phi_xixi + 2 (c1/hbar) |phi|^2 phi = 0`` on a
    grid in the rescaled coordinate xi

``full-variant`` multiplies the c2 bracket by ``phi``. It is a sensitivity
knob, not one of the derived equations.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np

from . import _kernels
from .errors import NumericBlowupError, ParameterError, StepSizeError
from .fields import Field, Grid, Trajectory
from .integrate import DEFAULT_CEILING, check_snapshots, segment_steps
from .model import Coefficients, ModelParams

DEFAULT_SAFETY = 0.25


class ContinuumModel(str, Enum):
    NLS = "nls"
    FULL = "full"
    FULL_VARIANT = "full-variant"
    ENVELOPE = "envelope"


EQUATION_NAMES = {
    ContinuumModel.NLS: "nls-constant-potential",
    ContinuumModel.FULL: "nls-extended",
    ContinuumModel.FULL_VARIANT: "nls-extended-c2-times-phi (non-derived variant)",
    ContinuumModel.ENVELOPE: "nls-standard-envelope-frame",
}


def laplacian(field: Field) -> Field:
    """Central second difference. Fixed-end grids get 0 at both edge points."""
    p = field.values
    dx2 = field.grid.dx ** 2
    if field.grid.periodic:
        lap = (np.roll(p, 1) + np.roll(p, -1) - 2.0 * p) / dx2
    else:
        lap = np.zeros_like(p)
        lap[1:-1] = (p[2:] + p[:-2] - 2.0 * p[1:-1]) / dx2
    return Field(lap, field.grid, field.time)


def _extra_terms(phi, coeffs: Coefficients, params: ModelParams, variant: bool):
    S = params.S
    a2 = np.abs(phi) ** 2
    bracket = 2.0 * coeffs.c2 * math.sqrt(2.0 * S) * (2.5 * a2 + 1.25 * phi**2 - S)
    if variant:
        bracket = bracket * phi
    pc = phi.conj()
    return bracket - coeffs.c3 * (4.0 * S * pc - 3.0 * pc * a2 - phi**3)


def _hold_edges(d: np.ndarray, grid: Grid) -> np.ndarray:
    if not grid.periodic:
        d[0] = 0.0
        d[-1] = 0.0
    return d


def rhs_nls(field: Field, coeffs: Coefficients, params: ModelParams) -> np.ndarray:
    """Time derivative under the constant-potential NLS; zero at fixed ends."""
    phi = field.values
    lap = laplacian(field).values
    f = -coeffs.c0 * params.S * lap + coeffs.V * phi - 2.0 * coeffs.c1 * np.abs(phi) ** 2 * phi
    return _hold_edges(f / (1j * params.hbar), field.grid)


def rhs_full_continuum(field: Field, coeffs: Coefficients, params: ModelParams,
                       variant: bool = False) -> np.ndarray:
    phi = field.values
    lap = laplacian(field).values
    f = (-coeffs.c0 * params.S * lap - 2.0 * coeffs.c1 * np.abs(phi) ** 2 * phi
         + (2.0 * params.S * coeffs.c1 + params.B) * phi
         + _extra_terms(phi, coeffs, params, variant))
    return _hold_edges(f / (1j * params.hbar), field.grid)


def rhs_envelope(field: Field, coeffs: Coefficients, params: ModelParams) -> np.ndarray:
    """Standard NLS on a xi grid (the constant potential gauged away)."""
    phi = field.values
    lap = laplacian(field).values
    return _hold_edges(1j * (lap + 2.0 * coeffs.c1 / params.hbar * np.abs(phi) ** 2 * phi),
                       field.grid)


def rhs(field: Field, coeffs, params, model) -> np.ndarray:
    model = ContinuumModel(model)
    if model is ContinuumModel.NLS:
        return rhs_nls(field, coeffs, params)
    if model is ContinuumModel.ENVELOPE:
        return rhs_envelope(field, coeffs, params)
    return rhs_full_continuum(field, coeffs, params, model is ContinuumModel.FULL_VARIANT)


def stability_dt(grid: Grid, coeffs: Coefficients, params: ModelParams, field=None,
                 safety: float = 1.0, model=ContinuumModel.NLS) -> float:
    """``safety * hbar / rate`` with ``rate`` bounding the spectral radius of
    the semi-discrete operator."""
    if not 0 < safety <= 1:
        raise ParameterError("safety must lie in (0, 1]", key="safety")
    amax = 0.0 if field is None else float(np.max(np.abs(_values(field))))
    hbar, S = params.hbar, params.S
    if ContinuumModel(model) is ContinuumModel.ENVELOPE:
        rate = 4.0 * hbar / grid.dx**2 + 2.0 * abs(coeffs.c1) * amax**2
    else:
        rate = (4.0 * coeffs.c0 * S / grid.dx**2 + abs(coeffs.V) + 2.0 * abs(coeffs.c1) * amax**2
                + 2.0 * abs(coeffs.c2) * math.sqrt(2.0 * S) * (1.0 + amax)
                + 4.0 * abs(coeffs.c3) * S)
    return safety * hbar / rate


def _values(field):
    return field.values if isinstance(field, Field) else np.asarray(field)


def background_frequency(coeffs: Coefficients, params: ModelParams, grid: Grid,
                         amplitude: float, k: float) -> float:
    """Rotation rate of a uniform-modulus wave ``A exp(ikx)`` under the
    semi-discrete NLS.

    Evolving in a frame rotating at this rate makes the far-field of a dark
    soliton stationary, which is what fixed-end boundaries need.
    """
    k2 = (2.0 - 2.0 * math.cos(k * grid.dx)) / grid.dx**2
    return (coeffs.V - 2.0 * coeffs.c1 * amplitude**2 + coeffs.c0 * params.S * k2) / params.hbar


def _kernel_args(grid, coeffs, params, model, frame_frequency):
    model = ContinuumModel(model)
    if model is ContinuumModel.ENVELOPE:
        kin, V, c2s, c3 = params.hbar, 0.0, 0.0, 0.0
    else:
        kin, V = coeffs.c0 * params.S, coeffs.V
        c2s, c3 = 2.0 * coeffs.c2 * math.sqrt(2.0 * params.S), coeffs.c3
    coef = np.array([kin / grid.dx**2, V, coeffs.c1, c2s, c3, params.S, params.hbar,
                     frame_frequency], dtype=float)
    mode = {ContinuumModel.NLS: _kernels.MODE_NLS,
            ContinuumModel.ENVELOPE: _kernels.MODE_NLS,
            ContinuumModel.FULL: _kernels.MODE_FULL,
            ContinuumModel.FULL_VARIANT: _kernels.MODE_FULL_VARIANT}[model]
    return coef, mode


def kernel_rhs(field: Field, coeffs, params, model, t: float = 0.0,
               frame_frequency: float = 0.0) -> np.ndarray:
    """Right-hand side as evaluated inside the compiled marcher (for tests)."""
    coef, mode = _kernel_args(field.grid, coeffs, params, model, frame_frequency)
    out = np.empty(field.grid.n_points, dtype=complex)
    _kernels.rhs_into(out, field.values.copy(), t, coef, mode, field.grid.periodic)
    return out


def evolve(initial: Field, coeffs: Coefficients, params: ModelParams, model="nls", *,
           t_end: float, snapshot_times=None, dt: float | None = None,
           safety: float = DEFAULT_SAFETY, frame_frequency: float = 0.0,
           ceiling: float = DEFAULT_CEILING) -> Trajectory:
    """RK4 method-of-lines evolution from ``initial`` (taken at t = 0).

    ``frame_frequency`` integrates ``exp(i Omega t) phi`` instead of ``phi``;
    the returned snapshots are always lab-frame ``phi``. On fixed-end grids
    the edge samples are held in that rotating frame.
    """
    model = ContinuumModel(model)
    grid = initial.grid
    if snapshot_times is None:
        snapshot_times = [0.0, t_end]
    if not t_end > 0:
        raise ParameterError("t_end must be positive", key="t_end")
    times = check_snapshots(snapshot_times, t_end)
    bound = stability_dt(grid, coeffs, params, initial, 1.0, model)
    if dt is None:
        dt = safety * bound
    if not dt > 0 or dt > bound * (1 + 1e-12):
        raise StepSizeError(f"dt = {dt:.4g} exceeds the stability bound {bound:.4g}", key="dt")
    coef, mode = _kernel_args(grid, coeffs, params, model, frame_frequency)

    psi = initial.values.copy()
    t = 0.0
    out = []
    for target in times:
        steps = np.array(segment_steps(t, target, dt), dtype=float)
        if steps.size:
            done, bad = _kernels.march(psi, t, steps, coef, mode, grid.periodic, ceiling)
            if bad >= 0:
                t_bad = t + float(steps[:done].sum())
                raise NumericBlowupError(
                    f"blow-up at t={t_bad:.6g}, x={grid.x[bad]:.6g} (index {bad})",
                    time=t_bad, index=int(bad))
        t = float(target)
        out.append(psi * np.exp(-1j * frame_frequency * t))

    meta = {"equation": EQUATION_NAMES[model], "model": model.value, "dt": dt,
            "frame_frequency": frame_frequency, "scheme": "rk4-central2",
            "params": params.to_dict(), "coeffs": coeffs.to_dict(), "grid": grid.to_dict()}
    return Trajectory(times, np.array(out), grid, meta)
