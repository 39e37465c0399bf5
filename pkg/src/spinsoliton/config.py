"""``key = value`` experiment config files.

Recognised keys: preset, J, delta, theta, B, S, hbar, A, v1, x0, model, bc,
n_points, x_min, x_max, dt, t_end, snapshots. Blank lines and ``#`` comments
are ignored. Starting from a preset, any key overrides the preset value; a
custom config must give every physical and soliton key, the model and t_end.
Grid, step and snapshot keys accept ``auto``.
"""

from __future__ import annotations

from dataclasses import replace

from .analytic import SolitonParams
from .errors import ConfigParseError, ParameterError
from .fields import Boundary
from .harness import ExperimentConfig, preset_config, resolve
from .model import ModelParams

PARAM_KEYS = ("J", "delta", "theta", "B", "S", "hbar")
SOLITON_KEYS = ("A", "v1", "x0")
RUN_KEYS = ("model", "bc", "n_points", "x_min", "x_max", "dt", "t_end", "snapshots")
KEYS = ("preset",) + PARAM_KEYS + SOLITON_KEYS + RUN_KEYS
CUSTOM_REQUIRED = ("J", "delta", "theta", "B", "S", "A", "v1", "x0", "model", "t_end")
_AUTO = {"auto", "none", ""}


def _float(text, key, line):
    try:
        return float(text)
    except ValueError:
        raise ConfigParseError(f"{key}: expected a number, got {text!r}", line, key) from None


def _optional_float(text, key, line):
    return None if text.lower() in _AUTO else _float(text, key, line)


def _convert(key, text, line):
    if key in PARAM_KEYS + SOLITON_KEYS + ("t_end",):
        return _float(text, key, line)
    if key in ("x_min", "x_max", "dt"):
        return _optional_float(text, key, line)
    if key == "n_points":
        try:
            return int(text)
        except ValueError:
            raise ConfigParseError(f"n_points: expected an integer, got {text!r}",
                                   line, key) from None
    if key == "snapshots":
        if text.lower() in _AUTO:
            return None
        return tuple(_float(s.strip(), key, line) for s in text.split(",") if s.strip())
    if key == "bc":
        return None if text.lower() in _AUTO else Boundary.parse(text)
    return text


def parse_pairs(text: str) -> dict:
    """Raw ``{key: (value_text, line_number)}`` mapping."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigParseError(f"unknown key {key!r}", lineno, key)
        if key in out:
            raise ConfigParseError(f"duplicate key {key!r}", lineno, key)
        out[key] = (value, lineno)
    return out


def parse_config(text: str) -> ExperimentConfig:
    pairs = parse_pairs(text)
    values = {k: _convert(k, v, line) for k, (v, line) in pairs.items()}
    preset = values.pop("preset", "custom")
    if preset == "custom":
        missing = [k for k in CUSTOM_REQUIRED if k not in values]
        if missing:
            raise ParameterError(f"custom config is missing {', '.join(missing)}",
                                 key=missing[0])
        base = ExperimentConfig()
    else:
        base = preset_config(preset)
    try:
        params = ModelParams(**{**base.params.to_dict(),
                                **{k: values[k] for k in PARAM_KEYS if k in values}})
        sp = SolitonParams(**{**base.soliton.to_dict(),
                              **{k: values[k] for k in SOLITON_KEYS if k in values}})
        run = {k: values[k] for k in RUN_KEYS if k in values}
        cfg = replace(base, preset=preset, params=params, soliton=sp, **run)
    except ParameterError as exc:
        if exc.key in pairs:
            line = pairs[exc.key][1]
            raise ConfigParseError(str(exc), line, exc.key) from exc
        raise
    return resolve(cfg)


def format_config(cfg: ExperimentConfig) -> str:
    """Inverse of :func:`parse_config` for a resolved config."""
    lines = [f"preset = {cfg.preset}"]
    for k in PARAM_KEYS:
        lines.append(f"{k} = {getattr(cfg.params, k)!r}")
    for k in SOLITON_KEYS:
        lines.append(f"{k} = {getattr(cfg.soliton, k)!r}")
    lines.append(f"model = {cfg.model}")
    lines.append(f"bc = {'auto' if cfg.bc is None else cfg.bc.value}")
    lines.append(f"n_points = {cfg.n_points}")
    for k in ("x_min", "x_max", "dt"):
        v = getattr(cfg, k)
        lines.append(f"{k} = {'auto' if v is None else repr(v)}")
    lines.append(f"t_end = {cfg.t_end!r}")
    snaps = "auto" if cfg.snapshots is None else ", ".join(repr(s) for s in cfg.snapshots)
    lines.append(f"snapshots = {snaps}")
    return "\n".join(lines) + "\n"
