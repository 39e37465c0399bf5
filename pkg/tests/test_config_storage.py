import os

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spinsoliton.config import KEYS, format_config, parse_config
from spinsoliton.errors import ConfigParseError, ParameterError, SchemaError, SolitonError
from spinsoliton.fields import Boundary, Grid, Trajectory
from spinsoliton.harness import resolve_preset
from spinsoliton.model import compute_coefficients
from spinsoliton.storage import (HEADER, LOCK_NAME, output_lock, read_trajectory,
                                 write_heatmap, write_trajectory)

CUSTOM = """
# bright run
J = 1.0
delta = 0.1
theta = 0.1
B = 100
S = 10
A = 1
v1 = 5
x0 = 0
model = nls
t_end = 3   # trailing comment
"""


def test_preset_line_gives_preset():
    assert parse_config("preset = fig1a\n") == resolve_preset("fig1a")


def test_preset_override():
    cfg = parse_config("preset = fig2a\ntheta = 0.9\n")
    assert cfg.params.theta == 0.9 and cfg.model == "full"


def test_custom_round_trip():
    cfg = parse_config(CUSTOM)
    assert cfg.params.B == 100.0 and cfg.model == "nls" and cfg.t_end == 3.0
    assert parse_config(format_config(cfg)) == cfg


@pytest.mark.parametrize("preset", ["fig1a", "fig2b", "fig3b", "fig4"])
def test_preset_round_trip(preset):
    cfg = resolve_preset(preset)
    assert parse_config(format_config(cfg)) == cfg


def test_invalid_value_reports_line_and_key():
    with pytest.raises(ConfigParseError) as info:
        parse_config("preset = fig1a\n\nJ = -1\n")
    assert info.value.line == 3 and info.value.key == "J"


@pytest.mark.parametrize("text,key,line", [
    ("preset = fig1a\ncolour = red\n", "colour", 2),
    ("J = 1\nJ = 2\n", "J", 2),
    ("preset = fig1a\nt_end = soon\n", "t_end", 2),
    ("preset = fig1a\nn_points = 1.5\n", "n_points", 2),
])
def test_parse_errors(text, key, line):
    with pytest.raises(ConfigParseError) as info:
        parse_config(text)
    assert (info.value.key, info.value.line) == (key, line)


def test_line_without_equals():
    with pytest.raises(ConfigParseError) as info:
        parse_config("preset fig1a\n")
    assert info.value.line == 1


def test_custom_missing_keys():
    with pytest.raises(ParameterError, match="missing"):
        parse_config("J = 1\n")


def test_keys_listed():
    assert set(KEYS) >= {"preset", "J", "delta", "theta", "B", "S", "hbar", "model", "bc"}


def _trajectory(rng, n_t=3, n_x=17, bc="periodic"):
    grid = Grid(n_x, -4.0, 4.0, bc, min_points=3)
    vals = rng.normal(size=(n_t, n_x)) + 1j * rng.normal(size=(n_t, n_x))
    cfg = resolve_preset("fig1a")
    meta = {"coeffs": compute_coefficients(cfg.params).to_dict(), "model": "nls"}
    return Trajectory(np.linspace(0, 1, n_t) / 3, vals, grid, meta)


def test_csv_round_trip(tmp_path, rng):
    traj = _trajectory(rng)
    path = write_trajectory(traj, tmp_path / "run.csv")
    with open(path) as fh:
        assert fh.readline().strip() == HEADER == "t,x,re,im,abs2"
    back = read_trajectory(path)
    assert np.max(np.abs(back.values - traj.values)) <= 1e-15 * np.max(np.abs(traj.values))
    np.testing.assert_array_equal(back.times, traj.times)
    np.testing.assert_allclose(back.grid.x, traj.grid.x, rtol=0, atol=1e-15)
    assert back.meta["coeffs"] == compute_coefficients(resolve_preset("fig1a").params).to_dict()
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    np.testing.assert_allclose(data[:, 4], data[:, 2] ** 2 + data[:, 3] ** 2, rtol=1e-15)


@given(st.lists(st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False),
                min_size=5, max_size=5))
def test_csv_values_exact(tmp_path_factory, zs):
    grid = Grid(5, 0.0, 5.0, "fixed", min_points=3)
    traj = Trajectory([0.0], [zs], grid)
    path = write_trajectory(traj, tmp_path_factory.mktemp("c") / "t.csv")
    np.testing.assert_array_equal(read_trajectory(path).values, traj.values)


def test_fixed_grid_survives(tmp_path, rng):
    traj = _trajectory(rng, bc="fixed")
    back = read_trajectory(write_trajectory(traj, tmp_path / "f.csv"))
    assert back.grid.bc is Boundary.FIXED and back.grid.n_points == 17


def test_bad_header(tmp_path, rng):
    path = write_trajectory(_trajectory(rng), tmp_path / "run.csv")
    text = path.read_text().splitlines()
    path.write_text("\n".join(["t,x,real,imag,abs2"] + text[1:]) + "\n")
    with pytest.raises(SchemaError):
        read_trajectory(path)


def test_missing_sidecar(tmp_path, rng):
    path = write_trajectory(_trajectory(rng), tmp_path / "run.csv")
    os.remove(path.with_suffix(".json"))
    with pytest.raises(SchemaError, match="sidecar"):
        read_trajectory(path)


def test_truncated_rows(tmp_path, rng):
    path = write_trajectory(_trajectory(rng), tmp_path / "run.csv")
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-1]) + "\n")
    with pytest.raises(SchemaError):
        read_trajectory(path)


def test_lock_contention(tmp_path):
    with output_lock(tmp_path):
        assert (tmp_path / LOCK_NAME).exists()
        with pytest.raises(SolitonError, match="in use"):
            with output_lock(tmp_path):
                pass
    assert not (tmp_path / LOCK_NAME).exists()
    with output_lock(tmp_path):
        pass


def test_heatmap_pgm(tmp_path, rng):
    traj = _trajectory(rng)
    path = write_heatmap(traj, tmp_path / "h.pgm")
    raw = path.read_bytes()
    head = b"P5\n17 3\n255\n"
    assert raw.startswith(head)
    pix = np.frombuffer(raw[len(head):], dtype=np.uint8).reshape(3, 17)
    assert pix.max() == 255
    mod = np.abs(traj.values)
    np.testing.assert_array_equal(pix, np.round(mod / mod.max() * 255))
