"""Named experiment presets reproducing the figure set, plus theta/lambda
sweeps.

A config with ``None`` in a grid or snapshot field means "derive it";
:func:`resolve` fills every such field so a report always carries the
concrete values that were used.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict, replace
from typing import Sequence

import numpy as np

from . import continuum, lattice, observables as obs
from .analytic import (SolitonKind, SolitonParams, plane_wave, plane_wave_frequency,
                       soliton, soliton_kinematics)
from .errors import ParameterError, SolitonError
from .fields import Boundary, Field, Grid, Trajectory
from .model import ModelParams, RegimeKind, classify_regime, compute_coefficients

log = logging.getLogger(__name__)

MODELS = ("analytic", "nls", "full", "full-variant", "lattice-simplified", "lattice-full")
PRESETS = ("fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3b", "fig4", "custom")
FIG4_LAMBDAS = (1.0, 10.0, 100.0, 1000.0, 5000.0)
DEFAULT_POINTS = 2048
MARGIN_WIDTHS = 10.0
LINEAR_SPAN = 200.0


@dataclass(frozen=True)
class ExperimentConfig:
    preset: str = "custom"
    params: ModelParams = field(default_factory=ModelParams)
    soliton: SolitonParams = field(default_factory=SolitonParams)
    model: str = "nls"
    t_end: float = 3.0
    bc: Boundary | None = None
    n_points: int = DEFAULT_POINTS
    x_min: float | None = None
    x_max: float | None = None
    dt: float | None = None
    snapshots: tuple | None = None
    lambdas: tuple | None = None

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise ParameterError(f"unknown preset {self.preset!r}; valid: {', '.join(PRESETS)}",
                                 key="preset")
        if self.model not in MODELS:
            raise ParameterError(f"unknown model {self.model!r}; valid: {', '.join(MODELS)}",
                                 key="model")
        if not (math.isfinite(self.t_end) and self.t_end > 0):
            raise ParameterError("t_end must be positive", key="t_end")
        if self.bc is not None:
            object.__setattr__(self, "bc", Boundary.parse(self.bc))
        if self.snapshots is not None:
            object.__setattr__(self, "snapshots", tuple(float(s) for s in self.snapshots))
        if self.lambdas is not None:
            object.__setattr__(self, "lambdas", tuple(float(v) for v in self.lambdas))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["params"] = self.params.to_dict()
        d["soliton"] = self.soliton.to_dict()
        d["bc"] = None if self.bc is None else self.bc.value
        return d

    @property
    def is_resolved(self) -> bool:
        return None not in (self.bc, self.x_min, self.x_max, self.snapshots)


def initial_kind(params: ModelParams) -> str:
    """Initial condition implied by the regime: bright, dark or plane wave."""
    return {RegimeKind.BRIGHT: "bright", RegimeKind.DARK: "dark",
            RegimeKind.LINEAR: "plane"}[classify_regime(params).kind]


def carrier_wavenumber(params: ModelParams, sp: SolitonParams) -> float:
    c = compute_coefficients(params)
    c0S = c.c0 * params.S
    v = sp.v1 * math.sqrt(c0S / params.hbar)
    return params.hbar * v / (2.0 * c0S)


def resolve(config: ExperimentConfig) -> ExperimentConfig:
    p, sp = config.params, config.soliton
    kind = initial_kind(p)
    bc = config.bc
    if bc is None:
        bc = Boundary.FIXED if kind == "dark" else Boundary.PERIODIC
    x_min, x_max = config.x_min, config.x_max
    if x_min is None or x_max is None:
        if kind == "plane":
            lo, hi = sp.x0 - LINEAR_SPAN / 2, sp.x0 + LINEAR_SPAN / 2
        else:
            k = soliton_kinematics(compute_coefficients(p), p, sp, kind)
            travel = k.v * config.t_end
            lo = sp.x0 + min(0.0, travel) - MARGIN_WIDTHS * k.width
            hi = sp.x0 + max(0.0, travel) + MARGIN_WIDTHS * k.width
        x_min = lo if x_min is None else x_min
        x_max = hi if x_max is None else x_max
    snapshots = config.snapshots
    if snapshots is None:
        snapshots = tuple(float(s) for s in np.linspace(0.0, config.t_end, 11))
    lambdas = config.lambdas
    if config.preset == "fig4" and lambdas is None:
        lambdas = FIG4_LAMBDAS
    return replace(config, bc=bc, x_min=float(x_min), x_max=float(x_max),
                   snapshots=snapshots, lambdas=lambdas)


_FIG = dict(J=1.0, delta=0.1, B=100.0, S=10.0, hbar=1.0)


def preset_config(name: str) -> ExperimentConfig:
    sp = SolitonParams(A=1.0, v1=5.0, x0=0.0)
    table = {
        "fig1a": dict(theta=0.1, model="analytic", t_end=3.0),
        "fig1b": dict(theta=1.5, model="analytic", t_end=3.0),
        "fig2a": dict(theta=0.1, model="full", t_end=10.0),
        "fig2b": dict(theta=0.9, model="full", t_end=10.0),
        "fig3a": dict(theta=1.0, model="full", t_end=10.0),
        "fig3b": dict(theta=1.5, model="full", t_end=10.0),
        "fig4": dict(theta=0.1, model="full", t_end=3.0),
    }
    if name not in table:
        raise ParameterError(f"unknown preset {name!r}; valid: {', '.join(table)}", key="preset")
    entry = table[name]
    params = ModelParams(theta=entry["theta"], **_FIG)
    return ExperimentConfig(preset=name, params=params, soliton=sp, model=entry["model"],
                            t_end=entry["t_end"])


def resolve_preset(name: str) -> ExperimentConfig:
    return resolve(preset_config(name))


def make_grid(config: ExperimentConfig) -> Grid:
    c = resolve(config)
    return Grid(c.n_points, c.x_min, c.x_max, c.bc)


def lattice_sites(config: ExperimentConfig) -> Grid:
    c = resolve(config)
    first = math.ceil(c.x_min)
    last = math.floor(c.x_max)
    n = last - first + (0 if c.bc is Boundary.PERIODIC else 1)
    return Grid.lattice(n, c.bc, first_site=first)


def initial_values(config: ExperimentConfig, x: np.ndarray, grid: Grid) -> np.ndarray:
    p, sp = config.params, config.soliton
    c = compute_coefficients(p)
    kind = initial_kind(p)
    if kind == "plane":
        return plane_wave(c, p, plane_wave_k(config, grid), sp.A, x, 0.0)
    return soliton(c, p, sp, kind, x, 0.0)


def plane_wave_k(config: ExperimentConfig, grid: Grid) -> float:
    """Carrier wavenumber, snapped to a grid mode on periodic grids."""
    k = carrier_wavenumber(config.params, config.soliton)
    if grid.periodic:
        dk = 2.0 * math.pi / grid.length
        k = round(k / dk) * dk
    return k


def reference_profile(config: ExperimentConfig):
    """Modulus profile (of displacement from the centre) the run should keep."""
    p, sp = config.params, config.soliton
    kind = initial_kind(p)
    if kind == "plane":
        return lambda rel: np.full_like(rel, sp.A)
    width = soliton_kinematics(compute_coefficients(p), p, sp, kind).width
    if kind == "bright":
        return lambda rel: sp.A / np.cosh(rel / width)
    return lambda rel: sp.A * np.abs(np.tanh(rel / width))


def simulate(config: ExperimentConfig, model: str | None = None) -> Trajectory:
    """Run one model for ``config`` and return its trajectory."""
    config = resolve(config)
    model = model or config.model
    p, sp = config.params, config.soliton
    c = compute_coefficients(p)
    kind = initial_kind(p)
    if model.startswith("lattice"):
        grid = lattice_sites(config)
        state = lattice.LatticeState(initial_values(config, grid.x, grid), 0.0, grid.bc)
        lm = lattice.LatticeModel(model.split("-", 1)[1], p)
        traj = lattice.evolve(state, lm, config.t_end, config.snapshots, dt=config.dt)
        traj.grid = grid
        traj.meta["grid"] = grid.to_dict()
    else:
        grid = make_grid(config)
        times = np.asarray(config.snapshots)
        if model == "analytic":
            if kind == "plane":
                k = plane_wave_k(config, grid)
                vals = [plane_wave(c, p, k, sp.A, grid.x, t) for t in times]
            else:
                vals = [soliton(c, p, sp, kind, grid.x, t) for t in times]
            traj = Trajectory(times, np.array(vals), grid,
                              {"equation": f"closed-form-{kind}", "model": "analytic",
                               "params": p.to_dict(), "coeffs": c.to_dict(),
                               "grid": grid.to_dict()})
        else:
            init = Field(initial_values(config, grid.x, grid), grid)
            frame = 0.0
            if kind == "dark" and not grid.periodic:
                frame = continuum.background_frequency(
                    c, p, grid, sp.A, carrier_wavenumber(p, sp))
            traj = continuum.evolve(init, c, p, model, t_end=config.t_end,
                                    snapshot_times=config.snapshots, dt=config.dt,
                                    frame_frequency=frame)
    traj.meta["initial"] = kind
    traj.meta["config"] = config.to_dict()
    return traj


@dataclass
class RunReport:
    config: dict
    trajectories: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    drifts: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)
    assertions: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.assertions.values())

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "trajectories": {k: f"{k}.csv" for k in self.trajectories},
            "equations": {k: t.meta.get("equation") for k, t in self.trajectories.items()},
            "diagnostics": {k: d.to_dict() for k, d in self.diagnostics.items()},
            "drifts": self.drifts,
            "metrics": self.metrics,
            "assertions": self.assertions,
            "passed": self.passed,
        }


def norm_drift(traj: Trajectory) -> float:
    n0 = np.sum(np.abs(traj.values[0]) ** 2)
    n1 = np.sum(np.abs(traj.values[-1]) ** 2)
    return float(abs(n1 - n0) / n0) if n0 > 0 else float(n1)


def lattice_energy_drift(traj: Trajectory) -> float:
    p = ModelParams(**traj.meta["params"])
    variant = traj.meta["equation"].split("-", 1)[1]
    m = lattice.LatticeModel(variant, p)
    e = [lattice.energy(lattice.LatticeState(v, 0.0, traj.grid.bc), m)
         for v in (traj.values[0], traj.values[-1])]
    return float(abs(e[1] - e[0]) / abs(e[0]))


def full_vs_simplified(full: Trajectory, simple: Trajectory) -> float:
    """L2 modulus distance of the final fields over the initial L2 norm."""
    return obs.l2_deviation(full.final, simple.final) / obs.l2_norm(full[0])


def _diagnose(config, traj):
    kind = initial_kind(config.params)
    if kind == "plane":
        return None
    feature = obs.Feature.PEAK if kind == "bright" else obs.Feature.DIP
    return obs.diagnose(traj, feature, reference_profile(config),
                        background=config.soliton.A if kind == "dark" else None)


def _soliton_asserts(config, traj, report, name):
    sp, p = config.soliton, config.params
    kind = initial_kind(p)
    c = compute_coefficients(p)
    report.assertions[f"{name}:regime_matches_angle"] = (
        classify_regime(p).kind.value.lower() == ("linear" if kind == "plane" else kind))
    if kind == "plane":
        spread = np.ptp(np.abs(traj.values), axis=1)
        report.metrics[f"{name}:max_modulus_spread"] = float(spread.max())
        if config.model in ("analytic", "nls"):
            report.assertions[f"{name}:uniform_modulus"] = bool(spread.max() < 1e-10 * sp.A)
        return
    k = soliton_kinematics(c, p, sp, kind)
    d = report.diagnostics[name]
    expected = sp.x0 + k.v * config.t_end
    report.metrics[f"{name}:expected_position"] = expected
    if config.model == "analytic":
        dx = traj.grid.dx
        report.assertions[f"{name}:position_on_analytic_line"] = bool(
            abs(d.peak_position - expected) <= dx)
        target = sp.A if kind == "bright" else 0.0
        report.assertions[f"{name}:extremum_modulus"] = bool(abs(d.peak_amplitude - target) < 1e-3)


def run_experiment(config: ExperimentConfig, out_dir=None) -> RunReport:
    """Execute ``config``, compute diagnostics and preset assertions, and
    optionally persist everything under ``out_dir``."""
    config = resolve(config)
    report = RunReport(config=config.to_dict())
    if config.preset == "fig4":
        _run_fig4(config, report)
    else:
        traj = simulate(config)
        name = config.model
        report.trajectories[name] = traj
        diag = _diagnose(config, traj)
        if diag is not None:
            report.diagnostics[name] = diag
        report.drifts[f"{name}:norm"] = norm_drift(traj)
        if config.model.startswith("lattice"):
            report.drifts[f"{name}:energy"] = lattice_energy_drift(traj)
        _soliton_asserts(config, traj, report, name)
        _preset_asserts(config, traj, report, name)
    if out_dir is not None:
        from .storage import write_report
        write_report(report, out_dir)
    return report


def _preset_asserts(config, traj, report, name):
    if config.preset == "fig2a":
        ref = reference_profile(config)
        early = obs.shape_retention(traj.until(3.0), ref, obs.Feature.PEAK)
        report.metrics[f"{name}:shape_retention_t3"] = early
        report.assertions[f"{name}:shape_retention_t3<0.05"] = bool(early < 0.05)
    elif config.preset == "fig3b":
        d = report.diagnostics[name]
        width = soliton_kinematics(compute_coefficients(config.params), config.params,
                                   config.soliton, "dark").width
        n_osc = obs.oscillations_outside(traj.final, d.peak_position, 2.0 * width,
                                         1e-6 * config.soliton.A)
        report.metrics[f"{name}:oscillation_turning_points"] = n_osc
        report.assertions[f"{name}:spatial_oscillation>=3"] = bool(n_osc >= 3)


def _run_fig4(config: ExperimentConfig, report: RunReport) -> None:
    dev = {}
    for lam in config.lambdas:
        params = config.params.replace(B=lam * config.params.J)
        cfg = replace(config, params=params, preset="custom")
        full = simulate(cfg, config.model)
        simple = simulate(cfg, "nls")
        tag = f"lambda{lam:g}"
        report.trajectories[f"{config.model}_{tag}"] = full
        report.trajectories[f"nls_{tag}"] = simple
        dev[lam] = full_vs_simplified(full, simple)
        report.metrics[f"deviation_{tag}"] = dev[lam]
        report.diagnostics[f"{config.model}_{tag}"] = _diagnose(cfg, full)
        report.drifts[f"{config.model}_{tag}:norm"] = norm_drift(full)
    if {1.0, 10.0, 100.0} <= dev.keys():
        report.assertions["D(100)<0.05"] = bool(dev[100.0] < 0.05)
        report.assertions["D(100)<D(10)<D(1)"] = bool(dev[100.0] < dev[10.0] < dev[1.0])
    if {1.0, 1000.0} <= dev.keys():
        report.assertions["D(1000)<D(1)"] = bool(dev[1000.0] < dev[1.0])
    if dev:
        report.assertions["deviation_max_at_smallest_lambda"] = bool(
            max(dev, key=dev.get) == min(dev))


@dataclass
class SweepRow:
    value: float
    regime: str
    lam: float
    shape_retention: float = float("nan")
    norm_drift: float = float("nan")
    velocity: float = float("nan")
    deviation: float = float("nan")
    error: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)


_SIMPLE = {"full": "nls", "full-variant": "nls", "lattice-full": "lattice-simplified"}


def _row(args) -> SweepRow:
    base, axis, value, regrid = args
    p = base.params
    p = p.replace(theta=value) if axis == "theta" else p.replace(B=value * p.J)
    cfg = replace(base, params=p, preset="custom")
    if regrid:
        cfg = replace(cfg, x_min=None, x_max=None, bc=None)
    regime = classify_regime(p)
    row = SweepRow(value=value, regime=regime.kind.value, lam=regime.lam)
    try:
        cfg = resolve(cfg)
        traj = simulate(cfg)
        row.norm_drift = norm_drift(traj)
        kind = initial_kind(p)
        feature = obs.Feature.DIP if kind == "dark" else obs.Feature.PEAK
        if kind == "plane":
            ref = np.full(traj.grid.n_points, cfg.soliton.A)
            d = np.abs(traj.final.values) - ref
            row.shape_retention = float(np.linalg.norm(d) / np.linalg.norm(ref))
        else:
            row.shape_retention = obs.shape_retention(traj, reference_profile(cfg), feature)
            if len(traj) >= 3:
                row.velocity = obs.estimate_velocity(obs.track_peak(traj, feature))
        if cfg.model in _SIMPLE:
            row.deviation = full_vs_simplified(traj, simulate(cfg, _SIMPLE[cfg.model]))
    except SolitonError as exc:
        log.warning("sweep row %s=%g failed: %s", axis, value, exc)
        row.error = f"{type(exc).__name__}: {exc}"
    return row


def sweep(config: ExperimentConfig, axis: str, values: Sequence[float], *, regrid: bool = True,
          workers: int = 1) -> list[SweepRow]:
    """One independent run per value of ``theta`` or ``lambda`` (= B/J).

    Rows come back sorted by value. With ``regrid`` the domain and boundary
    are re-derived for every row, since the soliton width depends on theta.
    """
    if axis not in ("theta", "lambda"):
        raise ParameterError(f"sweep axis must be 'theta' or 'lambda', got {axis!r}", key="axis")
    values = sorted(float(v) for v in values)
    if len(values) < 2:
        raise ParameterError("a sweep needs at least two values", key="values")
    jobs = [(config, axis, v, regrid) for v in values]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_row, jobs))
    return [_row(j) for j in jobs]


def format_table(rows: Sequence[SweepRow], axis: str) -> str:
    head = f"{axis:>10} {'regime':>8} {'lambda':>10} {'shape_ret':>12} {'norm_drift':>12} " \
           f"{'velocity':>12} {'deviation':>12}"
    lines = [head]
    for r in rows:
        line = (f"{r.value:>10.6g} {r.regime:>8} {r.lam:>10.6g} {r.shape_retention:>12.5e} "
                f"{r.norm_drift:>12.5e} {r.velocity:>12.6g} {r.deviation:>12.5e}")
        if r.error:
            line += f"  ERROR {r.error}"
        lines.append(line)
    return "\n".join(lines)
