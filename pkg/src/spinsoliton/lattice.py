"""Coherent-amplitude dynamics of the discrete chain.

Both variants are Hamiltonian flows ``i hbar d(alpha_j)/dt = dE/d(alpha_j^*)``.
Every neighbour term is summed over both neighbours ``j - 1`` and ``j + 1``.
The simplified model keeps only the rank-zero part of the exchange and
conserves the excitation number; the full model adds the ``c2`` and ``c3``
couplings, which break the phase symmetry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import NumericBlowupError, ParameterError, StepSizeError
from .fields import Boundary, Grid, Trajectory
from .integrate import DEFAULT_CEILING, check_finite, check_snapshots, rk4_step, segment_steps
from .model import Coefficients, ModelParams, compute_coefficients

# Fraction of the stability bound used when no dt is given. See default_dt.
DEFAULT_SAFETY = 0.02


class Variant(str, Enum):
    SIMPLIFIED = "simplified"
    FULL = "full"


@dataclass(frozen=True)
class LatticeState:
    amplitudes: np.ndarray
    time: float = 0.0
    boundary: Boundary = Boundary.PERIODIC

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex)
        if a.ndim != 1 or a.size < 3:
            raise ParameterError("a lattice state needs at least 3 sites", key="amplitudes")
        if not np.all(np.isfinite(a)):
            i = int(np.argmax(~np.isfinite(a)))
            raise NumericBlowupError(f"non-finite amplitude at site {i}", time=self.time, index=i)
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)
        object.__setattr__(self, "boundary", Boundary.parse(self.boundary))

    @property
    def n_sites(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True)
class LatticeModel:
    variant: Variant
    params: ModelParams
    coeffs: Coefficients = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        expected = compute_coefficients(self.params)
        if self.coeffs is None:
            object.__setattr__(self, "coeffs", expected)
        elif self.coeffs != expected:
            raise ParameterError("coefficients are inconsistent with params", key="coeffs")


def _neighbours(a: np.ndarray, bc: Boundary):
    """(right, left) neighbour arrays; missing neighbours are zero."""
    if bc is Boundary.PERIODIC:
        return np.roll(a, -1), np.roll(a, 1)
    right = np.zeros_like(a)
    left = np.zeros_like(a)
    right[:-1] = a[1:]
    left[1:] = a[:-1]
    return right, left


def _bonds(a: np.ndarray, bc: Boundary):
    """(a_j, a_{j+1}) over all bonds of the chain."""
    if bc is Boundary.PERIODIC:
        return a, np.roll(a, -1)
    return a[:-1], a[1:]


def _grad_simplified(a, bc, coeffs: Coefficients, params: ModelParams):
    c0, c1, S, B = coeffs.c0, coeffs.c1, params.S, params.B
    r, l = _neighbours(a, bc)
    n, nr, nl = np.abs(a) ** 2, np.abs(r) ** 2, np.abs(l) ** 2
    return (-c0 * S * (r + l - 2.0 * a)
            + (2.0 * S * c1 + B) * a
            + 0.25 * c0 * (2.0 * n * (r + l) + nr * r + nl * l + (r.conj() + l.conj()) * a * a)
            - (c0 + c1) * a * (nr + nl))


def _grad_extra(a, bc, coeffs: Coefficients, params: ModelParams):
    """Gradient of the c2/c3 part of the full energy."""
    c2, c3, S = coeffs.c2, coeffs.c3, params.S
    r, l = _neighbours(a, bc)
    n, nr, nl = np.abs(a) ** 2, np.abs(r) ** 2, np.abs(l) ** 2
    sum_c = r.conj() + l.conj()
    g2 = c2 * math.sqrt(2.0 * S) * (
        nr + nl + sum_c * a + (r + l) * a - 2.0 * S + n + 0.5 * a * a)
    g3 = -2.0 * c3 * S * (
        sum_c - n * sum_c / (2.0 * S) - (nr * r.conj() + nl * l.conj()) / (4.0 * S)
        - a * a * (r + l) / (4.0 * S))
    return g2 + g3


def _derivative(a, bc, model: LatticeModel):
    g = _grad_simplified(a, bc, model.coeffs, model.params)
    if model.variant is Variant.FULL:
        g = g + _grad_extra(a, bc, model.coeffs, model.params)
    out = g / (1j * model.params.hbar)
    if bc is Boundary.FIXED:
        out[0] = 0.0
        out[-1] = 0.0
    return out


def _check_variant(model: LatticeModel, variant: Variant) -> None:
    if model.variant is not variant:
        raise ParameterError(f"expected a {variant.value} model, got {model.variant.value}",
                             key="variant")


def rhs_simplified(state: LatticeState, model: LatticeModel) -> np.ndarray:
    _check_variant(model, Variant.SIMPLIFIED)
    return _derivative(state.amplitudes, state.boundary, model)


def rhs_full(state: LatticeState, model: LatticeModel) -> np.ndarray:
    """Time derivative under the full model.

    Written out, ``i hbar`` times this reproduces the c-number form of the
    operator equation of motion with every ``j +- 1`` term summed over both
    neighbours; see ``_grad_extra``.
    """
    _check_variant(model, Variant.FULL)
    return _derivative(state.amplitudes, state.boundary, model)


def rhs(state: LatticeState, model: LatticeModel) -> np.ndarray:
    return _derivative(state.amplitudes, state.boundary, model)


def _energy_simplified(a, bc, coeffs, params) -> float:
    c0, c1, S, B = coeffs.c0, coeffs.c1, params.S, params.B
    n = np.abs(a) ** 2
    aj, ak = _bonds(a, bc)
    nj, nk = np.abs(aj) ** 2, np.abs(ak) ** 2
    site = (B + 2.0 * S * (c0 + c1)) * n.sum()
    bond = (-2.0 * c0 * S * np.real(aj.conj() * ak)
            - (c0 + c1) * nj * nk
            + 0.5 * c0 * np.real(nj * aj.conj() * ak + aj.conj() * nk * ak))
    return float(site + bond.sum())


def _energy_extra(a, bc, coeffs, params) -> float:
    c2, c3, S = coeffs.c2, coeffs.c3, params.S
    n = np.abs(a) ** 2
    aj, ak = _bonds(a, bc)
    nj, nk = np.abs(aj) ** 2, np.abs(ak) ** 2
    e2 = c2 * math.sqrt(2.0 * S) * 2.0 * (
        np.real(aj.conj() * nk + ak.conj() * nj).sum()
        + np.real(0.5 * a.conj() * n - 2.0 * S * a.conj()).sum())
    pair = aj.conj() * ak.conj()
    e3 = -2.0 * c3 * S * 2.0 * np.real(-(nj * pair + pair * nk) / (4.0 * S) + pair).sum()
    return float(e2 + e3)


def energy_simplified(state: LatticeState, model: LatticeModel) -> float:
    _check_variant(model, Variant.SIMPLIFIED)
    return _energy_simplified(state.amplitudes, state.boundary, model.coeffs, model.params)


def energy_full(state: LatticeState, model: LatticeModel) -> float:
    _check_variant(model, Variant.FULL)
    a, bc = state.amplitudes, state.boundary
    return (_energy_simplified(a, bc, model.coeffs, model.params)
            + _energy_extra(a, bc, model.coeffs, model.params))


def energy(state: LatticeState, model: LatticeModel) -> float:
    if model.variant is Variant.FULL:
        return energy_full(state, model)
    return energy_simplified(state, model)


def norm(state: LatticeState) -> float:
    return float(np.sum(np.abs(state.amplitudes) ** 2))


def stability_dt(state: LatticeState, model: LatticeModel) -> float:
    """Inverse spectral-radius estimate of the RK4 right-hand side (dx = 1)."""
    c, p = model.coeffs, model.params
    amax = float(np.max(np.abs(state.amplitudes)))
    rate = 4.0 * c.c0 * p.S + abs(c.V) + 2.0 * abs(c.c1) * amax**2
    if model.variant is Variant.FULL:
        rate += 2.0 * abs(c.c2) * math.sqrt(2.0 * p.S) * (1.0 + amax) + 4.0 * abs(c.c3) * p.S
    return p.hbar / rate


def default_dt(state: LatticeState, model: LatticeModel, safety: float = DEFAULT_SAFETY) -> float:
    # RK4 amplification on the imaginary axis is 1 - (w dt)^6 / 72; with the
    # carrier near V this needs safety ~0.02 to keep norm drift below 1e-8.
    return safety * stability_dt(state, model)


def step_rk4(state: LatticeState, model: LatticeModel, dt: float,
             ceiling: float = DEFAULT_CEILING) -> LatticeState:
    if not dt > 0:
        raise StepSizeError("dt must be positive", key="dt")
    if dt > stability_dt(state, model) * (1 + 1e-12):
        raise StepSizeError(f"dt = {dt:.4g} exceeds stability bound "
                            f"{stability_dt(state, model):.4g}", key="dt")
    a = _advance(state.amplitudes, state.boundary, model, state.time, dt)
    check_finite(a, state.time + dt, ceiling)
    return LatticeState(a, state.time + dt, state.boundary)


def _advance(a, bc, model, t, h):
    new = rk4_step(lambda _t, y: _derivative(y, bc, model), t, a, h)
    if bc is Boundary.FIXED:
        new[0] = a[0]
        new[-1] = a[-1]
    return new


def evolve(state: LatticeState, model: LatticeModel, t_end: float, snapshot_times=None,
           dt: float | None = None, ceiling: float = DEFAULT_CEILING) -> Trajectory:
    """Integrate from ``state.time`` (taken as 0) to ``t_end`` with RK4 and
    record snapshots exactly on the requested times."""
    if snapshot_times is None:
        snapshot_times = [0.0, t_end]
    times = check_snapshots(snapshot_times, t_end)
    bound = stability_dt(state, model)
    if dt is None:
        dt = default_dt(state, model)
    if not 0 < dt <= bound * (1 + 1e-12):
        raise StepSizeError(f"dt = {dt:.4g} outside (0, {bound:.4g}]", key="dt")
    bc = state.boundary
    a = state.amplitudes.copy()
    t = 0.0
    out = []
    for target in times:
        for h in segment_steps(t, target, dt):
            a = _advance(a, bc, model, t, h)
            t += h
            check_finite(a, t, ceiling)
        t = float(target)
        out.append(a.copy())
    grid = Grid.lattice(a.size, bc)
    meta = {"equation": f"lattice-{model.variant.value}", "dt": dt,
            "params": model.params.to_dict(), "coeffs": model.coeffs.to_dict(),
            "grid": grid.to_dict()}
    return Trajectory(times, np.array(out), grid, meta)


def with_variant(model: LatticeModel, variant) -> LatticeModel:
    return replace(model, variant=Variant(variant))
