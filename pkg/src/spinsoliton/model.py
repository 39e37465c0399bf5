"""Physical parameters of the XXZ chain in an oblique field and the
coefficients derived from them."""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from enum import Enum

from .errors import ParameterError

THETA_MAGIC = math.acos(math.sqrt(1.0 / 3.0))
# low-order parts so that THETA_MAGIC + _THETA_LO and math.pi + _PI_LO are
# good to about 32 digits
_THETA_LO = -1.9885105943796806e-17
_PI_LO = 1.2246467991473532e-16
LINEAR_TOL = 1e-12  # relative to J
LAMBDA_WINDOW = (10.0, 1000.0)


@dataclass(frozen=True)
class ModelParams:
    """One chain-plus-field configuration.

    Attributes:
        J: exchange coupling (> 0, ferromagnetic).
        delta: anisotropy offset, Delta - 1.
        theta: field angle in radians.
        B: field magnitude (> 0).
        S: site spin (>= 1/2).
        hbar: reduced Planck constant in the chosen units.
    """

    J: float = 1.0
    delta: float = 0.1
    theta: float = 0.1
    B: float = 100.0
    S: float = 10.0
    hbar: float = 1.0

    def __post_init__(self):
        validate_params(self)

    @property
    def lam(self) -> float:
        return self.B / self.J

    def replace(self, **changes) -> "ModelParams":
        d = asdict(self)
        d.update(changes)
        return ModelParams(**d)

    def to_dict(self) -> dict:
        return asdict(self)


def validate_params(p: ModelParams) -> None:
    for name in ("J", "delta", "theta", "B", "S", "hbar"):
        value = getattr(p, name)
        if not isinstance(value, (int, float)) or not math.isfinite(value):
            raise ParameterError(f"{name} must be a finite number, got {value!r}", key=name)
    if p.J <= 0:
        raise ParameterError(f"J must be positive, got {p.J}", key="J")
    if p.B <= 0:
        raise ParameterError(f"B must be positive, got {p.B}", key="B")
    if p.S < 0.5:
        raise ParameterError(f"S must be >= 1/2, got {p.S}", key="S")
    if p.hbar <= 0:
        raise ParameterError(f"hbar must be positive, got {p.hbar}", key="hbar")


@dataclass(frozen=True)
class Coefficients:
    c0: float
    c1: float
    c2: float
    c3: float
    V: float
    chi: float
    theta_magic: float = THETA_MAGIC

    def to_dict(self) -> dict:
        return asdict(self)


def anisotropy_factor(theta: float) -> float:
    """``3 cos^2(theta) - 1`` with small relative error near its zeros.

    Uses 3cos^2(t) - 1 = -3 sin(t + t0) sin(t - t0), after reducing ``theta``
    into [-pi/2, pi/2] with an exact remainder; the reduced angle and ``t0``
    are both kept as (high, low) pairs so that ``t - t0`` is not lost to
    cancellation when ``theta`` sits at the magic angle.
    """
    r = math.remainder(theta, math.pi)  # exact w.r.t. the double pi
    k = round((theta - r) / math.pi)
    a_hi, a_lo = r, -k * _PI_LO
    if a_hi + a_lo < 0.0:
        a_hi, a_lo = -a_hi, -a_lo
    d = (a_hi - THETA_MAGIC) + (a_lo - _THETA_LO)
    return -3.0 * math.sin(a_hi + THETA_MAGIC) * math.sin(d)


def compute_coefficients(params: ModelParams) -> Coefficients:
    """Coefficients of the bosonized Hamiltonian for ``params``.

    ``c1`` sets the cubic nonlinearity and vanishes at the magic angle;
    ``c2`` and ``c3`` multiply the terms that break the U(1) phase symmetry.
    """
    validate_params(params)
    J, d, th, S = params.J, params.delta, params.theta, params.S
    s = math.sin(th)
    c0 = J * (1.0 + d * s * s / 2.0)
    c1 = J * d * anisotropy_factor(th) / 2.0
    c2 = J * d * math.sin(2.0 * th) / 4.0
    c3 = J * d * s * s / 4.0
    V = 2.0 * S * c1 + params.B
    return Coefficients(c0=c0, c1=c1, c2=c2, c3=c3, V=V, chi=V / params.hbar)


class RegimeKind(str, Enum):
    BRIGHT = "Bright"
    DARK = "Dark"
    LINEAR = "Linear"


@dataclass(frozen=True)
class Regime:
    kind: RegimeKind
    lam: float
    admissible: bool


def classify_regime(params: ModelParams) -> Regime:
    c1 = compute_coefficients(params).c1
    tol = LINEAR_TOL * params.J
    if c1 > tol:
        kind = RegimeKind.BRIGHT
    elif c1 < -tol:
        kind = RegimeKind.DARK
    else:
        kind = RegimeKind.LINEAR
    lam = params.B / params.J
    lo, hi = LAMBDA_WINDOW
    return Regime(kind=kind, lam=lam, admissible=lo <= lam <= hi)
