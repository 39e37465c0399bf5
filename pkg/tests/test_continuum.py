import math
from dataclasses import replace

import numpy as np
import pytest
import sympy as sp_
from hypothesis import given, settings, strategies as st

from spinsoliton import continuum
from spinsoliton.analytic import SolitonParams, bright_soliton, plane_wave
from spinsoliton.errors import NumericBlowupError, ParameterError, StepSizeError
from spinsoliton.fields import Field, Grid
from spinsoliton.model import THETA_MAGIC, ModelParams, compute_coefficients
from spinsoliton import observables as obs

P = ModelParams()
C = compute_coefficients(P)
MODELS = ["nls", "full", "full-variant", "envelope"]


def _rand_field(seed, n=32, bc="periodic"):
    rng = np.random.default_rng(seed)
    return Field(rng.normal(size=n) + 1j * rng.normal(size=n), Grid(n, -4.0, 4.0, bc))


def test_laplacian_of_quadratic_is_exact_on_fixed_grid():
    g = Grid(21, -1.0, 1.0, "fixed")
    lap = continuum.laplacian(Field(g.x**2, g)).values
    np.testing.assert_allclose(lap[1:-1], 2.0, rtol=1e-10)
    assert lap[0] == 0 and lap[-1] == 0


def test_laplacian_symbol_on_periodic_mode():
    g = Grid(64, 0.0, 2 * np.pi, "periodic")
    k = 5
    lap = continuum.laplacian(Field(np.exp(1j * k * g.x), g)).values
    symbol = -(2 - 2 * np.cos(k * g.dx)) / g.dx**2
    np.testing.assert_allclose(lap, symbol * np.exp(1j * k * g.x), rtol=1e-12, atol=1e-12)


def test_zero_field():
    z = Field(np.zeros(20), Grid(20, 0, 1))
    assert np.all(continuum.rhs_nls(z, C, P) == 0)
    d = continuum.rhs_full_continuum(z, C, P)
    np.testing.assert_allclose(d, -2 * C.c2 * math.sqrt(2 * P.S) * P.S / (1j * P.hbar),
                               rtol=1e-15)


@given(seed=st.integers(0, 2**32 - 1))
def test_theta_zero_full_is_nls(seed):
    p = ModelParams(theta=0.0)
    c = compute_coefficients(p)
    f = _rand_field(seed)
    np.testing.assert_allclose(continuum.rhs_full_continuum(f, c, p), continuum.rhs_nls(f, c, p),
                               rtol=1e-14, atol=1e-12)


def test_uniform_real_field_against_symbolic_reduction():
    a, c0, c1, c2, c3, S, B, hb = sp_.symbols("a c0 c1 c2 c3 S B hbar", real=True)
    phi = a  # uniform, real: the Laplacian vanishes
    expr = (-2 * c1 * phi**3 + (2 * S * c1 + B) * phi
            + 2 * c2 * sp_.sqrt(2 * S) * (sp_.Rational(5, 2) * phi**2 + sp_.Rational(5, 4) * phi**2 - S)
            - c3 * (4 * S * phi - 3 * phi**3 - phi**3)) / (sp_.I * hb)
    subs = {c0: C.c0, c1: C.c1, c2: C.c2, c3: C.c3, S: P.S, B: P.B, hb: P.hbar, a: 0.7}
    expected = complex(sp_.N(expr.subs(subs), 30))
    g = Grid(16, 0, 1)
    got = continuum.rhs_full_continuum(Field(np.full(16, 0.7), g), C, P)
    np.testing.assert_allclose(got, expected, rtol=1e-13)


@pytest.mark.parametrize("model", MODELS)
@pytest.mark.parametrize("bc", ["periodic", "fixed"])
def test_compiled_kernel_matches_numpy(model, bc):
    f = _rand_field(5, 40, bc)
    ref = continuum.rhs(f, C, P, model)
    got = continuum.kernel_rhs(f, C, P, model)
    np.testing.assert_allclose(got, ref, rtol=1e-12, atol=1e-10)
    if bc == "fixed":
        assert got[0] == 0 and got[-1] == 0


@given(omega=st.floats(-200, 200), t=st.floats(0, 5), model=st.sampled_from(MODELS[:3]))
@settings(max_examples=30)
def test_rotating_frame_kernel(omega, t, model):
    psi = _rand_field(9, 24)
    phi = Field(psi.values * np.exp(-1j * omega * t), psi.grid)
    expected = np.exp(1j * omega * t) * continuum.rhs(phi, C, P, model) + 1j * omega * psi.values
    got = continuum.kernel_rhs(psi, C, P, model, t=t, frame_frequency=omega)
    np.testing.assert_allclose(got, expected, rtol=1e-11, atol=1e-9)


def test_stability_dt_examples():
    toy = replace(C, c0=1.0, c1=0.0, c2=0.0, c3=0.0, V=0.0)
    g = Grid(101, 0.0, 10.0, "fixed")  # dx = 0.1
    assert continuum.stability_dt(g, toy, P, safety=0.5) == pytest.approx(1.25e-4, rel=1e-12)
    # same safety as above; the extra |V| and c1..c3 terms only shrink the step
    real = continuum.stability_dt(g, C, P, np.ones(101), safety=0.5)
    assert 0 < real < 1.25e-4
    with pytest.raises(ParameterError):
        continuum.stability_dt(g, C, P, safety=1.5)


def test_halving_dx_quarters_dt():
    g1 = Grid(1000, 0.0, 1.0, "periodic")
    g2 = Grid(2000, 0.0, 1.0, "periodic")
    r = continuum.stability_dt(g1, C, P) / continuum.stability_dt(g2, C, P)
    assert r == pytest.approx(4.0, rel=1e-3)


def _bright_initial(n=1024, lo=-60.0, hi=100.0):
    g = Grid(n, lo, hi, "periodic")
    return Field(bright_soliton(C, P, SolitonParams(), g.x, 0.0), g)


def test_zero_initial_stays_zero():
    z = Field(np.zeros(32), Grid(32, 0, 10))
    traj = continuum.evolve(z, C, P, "nls", t_end=0.1)
    assert np.all(traj.values == 0)


@pytest.mark.slow
def test_bright_peak_position_and_norm():
    f0 = Field(*(lambda g: (bright_soliton(C, P, SolitonParams(), g.x, 0.0), g))(
        Grid(2048, -100.78109257220754, 102.36262532206918, "periodic")))
    traj = continuum.evolve(f0, C, P, "nls", t_end=3.0, snapshot_times=[0.0, 1.5, 3.0])
    pos, _ = obs.locate(traj.final)
    assert abs(pos - 47.446) < f0.grid.dx
    n0 = np.sum(np.abs(traj.values[0]) ** 2)
    n1 = np.sum(np.abs(traj.values[-1]) ** 2)
    assert abs(n1 - n0) / n0 < 1e-8


def test_magic_angle_plane_wave_keeps_uniform_modulus():
    p = ModelParams(theta=THETA_MAGIC)
    c = compute_coefficients(p)
    g = Grid(128, 0.0, 64.0, "periodic")
    k = 2 * np.pi * 3 / g.length
    f0 = Field(plane_wave(c, p, k, 1.0, g.x, 0.0), g)
    traj = continuum.evolve(f0, c, p, "nls", t_end=3.0, snapshot_times=np.linspace(0, 3, 7))
    for f in traj:
        assert f.modulus.max() - f.modulus.min() < 1e-10


@given(shift=st.integers(1, 63), model=st.sampled_from(["nls", "full"]))
@settings(max_examples=10)
def test_translation_commutes_with_evolution(shift, model):
    f0 = _rand_field(13, 64)
    f0 = Field(0.3 * f0.values, f0.grid)
    a = continuum.evolve(f0, C, P, model, t_end=0.01)
    b = continuum.evolve(Field(np.roll(f0.values, shift), f0.grid), C, P, model, t_end=0.01,
                         dt=a.meta["dt"])
    np.testing.assert_allclose(np.roll(a.final.values, shift), b.final.values, rtol=0,
                               atol=1e-13)


def test_fixed_ends_are_held_in_lab_frame():
    f0 = _rand_field(21, 48, "fixed")
    traj = continuum.evolve(f0, C, P, "full", t_end=0.01, snapshot_times=[0, 0.005, 0.01])
    for v in traj.values:
        assert v[0] == f0.values[0] and v[-1] == f0.values[-1]


def test_fixed_ends_are_held_in_rotating_frame():
    f0 = _rand_field(21, 48, "fixed")
    om = 97.0
    traj = continuum.evolve(f0, C, P, "nls", t_end=0.01, snapshot_times=[0, 0.01],
                            frame_frequency=om)
    np.testing.assert_allclose(traj.final.values[[0, -1]],
                               f0.values[[0, -1]] * np.exp(-1j * om * 0.01), rtol=1e-14)


def test_background_frequency_makes_uniform_wave_stationary():
    p = ModelParams(theta=1.5)
    c = compute_coefficients(p)
    g = Grid(200, 0.0, 100.0, "fixed")
    k = 0.3
    w = continuum.background_frequency(c, p, g, 0.8, k)
    f0 = Field(0.8 * np.exp(1j * k * g.x), g)
    traj = continuum.evolve(f0, c, p, "nls", t_end=0.5, frame_frequency=w)
    np.testing.assert_allclose(traj.final.values, f0.values * np.exp(-1j * w * 0.5), atol=1e-9)


def test_step_size_error():
    f0 = _bright_initial(256)
    with pytest.raises(StepSizeError):
        continuum.evolve(f0, C, P, "nls", t_end=0.1, dt=1.0)


def test_blowup_error_carries_time_and_location():
    f0 = Field(np.zeros(32), Grid(32, 0.0, 8.0))
    with pytest.raises(NumericBlowupError) as err:
        continuum.evolve(f0, C, P, "full", t_end=1.0, ceiling=1e-3)
    assert 0 < err.value.time < 1.0
    assert err.value.index is not None
    assert "x=" in str(err.value)


def test_snapshot_validation_and_meta():
    f0 = _bright_initial(128)
    with pytest.raises(ParameterError):
        continuum.evolve(f0, C, P, "nls", t_end=0.1, snapshot_times=[0.0, 0.2])
    traj = continuum.evolve(f0, C, P, "full", t_end=0.013, snapshot_times=[0.0, 0.004, 0.013])
    np.testing.assert_array_equal(traj.times, [0.0, 0.004, 0.013])
    assert traj.meta["equation"] == continuum.EQUATION_NAMES[continuum.ContinuumModel.FULL]
    assert traj.meta["scheme"] == "rk4-central2"
