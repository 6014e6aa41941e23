"""Flat ``section.key = value`` configuration files.

Example::

    grid.f_lo = 0.05
    grid.f_hi = 5e4
    grid.n_points = 100
    channel.1.r_s = 3900
    channel.1.r_f = 100e3
    channel.1.c_dl = 68e-9

``#`` starts a comment. Channels are ``channel.<id>.<key>``; a channel is
either Randles (``r_s``, ``r_f``, ``c_dl``) or tabulated (``table`` pointing
to a CSV of ``freq_hz, re_ohm, im_ohm`` rows, relative to the config file).
"""

from __future__ import annotations

import csv
import os
import re
from pathlib import Path

from .afe import AdcSpec, ChannelConfig, RandlesModel, RheostatSpec, TableModel
from .dds import ExcitationSpec
from .errors import BandError, ParseError, RangeError, ValidationError
from .freq_plan import ClockConfig
from .spectrum import CalibrationConfig
from .sweep import SweepConfig, excitation_for_code, log_grid

SEED_ENV = "HERMEIS_SEED"

_SCALARS = {
    "grid.f_lo": float,
    "grid.f_hi": float,
    "grid.n_points": int,
    "grid.points": None,
    "clocks.f_s": float,
    "clocks.f_clk": float,
    "clocks.f_dds_clk": float,
    "clocks.m": int,
    "adc.v_dd": float,
    "adc.bits": int,
    "adc.ideal": "bool",
    "excitation.v0": float,
    "excitation.v1": float,
    "excitation.phi": float,
    "excitation.v_mid": float,
    "excitation.v_in_pp": float,
    "excitation.n_in": int,
    "rheostat.r_max": float,
    "rheostat.r_min": float,
    "rheostat.r_a": float,
    "cal.alpha": float,
    "sweep.overhead_s": float,
    "reference.noise_rms": float,
    "reference.seed": int,
}

_CHANNEL_KEYS = {
    "r_s": float,
    "r_f": float,
    "c_dl": float,
    "table": str,
    "n_out": int,
    "n_out_assumed": int,
    "readout_sign": int,
    "noise_rms": float,
    "glitch": float,
    "seed": int,
}

_CHANNEL_RE = re.compile(r"^channel\.(\d+)\.([a-z_]+)$")


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _convert(conv, text, lineno, key):
    try:
        if conv == "bool":
            return _bool(text)
        if conv is int:
            v = float(text)
            if v != int(v):
                raise ValueError("expected an integer")
            return int(v)
        return conv(text)
    except ValueError as e:
        raise ParseError(str(e), lineno, key) from None


def read_pairs(text: str) -> dict:
    """Parse key/value lines into ``{key: (value_text, lineno)}``."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected 'key = value'", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.lower()
        if not key or not value:
            raise ParseError("empty key or value", lineno, key or None)
        if key in out:
            raise ValidationError(f"line {lineno}: duplicate key {key!r} (first set on line {out[key][1]})")
        out[key] = (value, lineno)
    return out


def _load_table(path: Path) -> TableModel:
    freqs, zs = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                f, re_, im = (float(v) for v in row[:3])
            except ValueError:
                continue  # header
            freqs.append(f)
            zs.append(complex(re_, im))
    return TableModel(tuple(freqs), tuple(zs))


def parse_config(path, env=None) -> SweepConfig:
    path = Path(path)
    env = os.environ if env is None else env
    return config_from_text(path.read_text(), base_dir=path.parent, env=env)


def config_from_text(text: str, base_dir=Path("."), env=None) -> SweepConfig:
    env = {} if env is None else env
    pairs = read_pairs(text)
    vals, chans = {}, {}
    for key, (text_v, lineno) in pairs.items():
        m = _CHANNEL_RE.match(key)
        if m:
            cid, sub = int(m.group(1)), m.group(2)
            if sub not in _CHANNEL_KEYS:
                raise ParseError("unknown channel key", lineno, key)
            chans.setdefault(cid, {})[sub] = (_convert(_CHANNEL_KEYS[sub], text_v, lineno, key), lineno)
        elif key in _SCALARS:
            if key == "grid.points":
                try:
                    vals[key] = [float(v) for v in text_v.split(",") if v.strip()]
                except ValueError as e:
                    raise ParseError(str(e), lineno, key) from None
            else:
                vals[key] = _convert(_SCALARS[key], text_v, lineno, key)
        else:
            raise ParseError("unknown key", lineno, key)

    try:
        return _build(vals, chans, Path(base_dir), env)
    except (ValueError, RangeError) as e:
        if isinstance(e, (ParseError, ValidationError)):
            raise
        raise ValidationError(str(e)) from None


def _build(vals, chans, base_dir, env) -> SweepConfig:
    g = vals.get
    clocks = ClockConfig(
        f_s=g("clocks.f_s", 200e3),
        f_clk=g("clocks.f_clk", 50e6),
        f_dds_clk=g("clocks.f_dds_clk", 100e6),
        M=g("clocks.m", 32),
    )
    rheo = RheostatSpec(
        R_max=g("rheostat.r_max", 50e3),
        R_min=g("rheostat.r_min", 0.002 * g("rheostat.r_max", 50e3)),
        R_A=g("rheostat.r_a", 100e3),
    )

    if "grid.points" in vals:
        if any(k in vals for k in ("grid.f_lo", "grid.f_hi", "grid.n_points")):
            raise ValidationError("give either grid.points or grid.f_lo/f_hi/n_points, not both")
        grid = vals["grid.points"]
    elif "grid.f_lo" in vals or "grid.f_hi" in vals:
        try:
            grid = log_grid(g("grid.f_lo", 5e-2), g("grid.f_hi", 5e4), g("grid.n_points", 100), clocks)
        except BandError as e:
            raise ValidationError(f"grid: {e}") from None
    else:
        grid = []
    if not grid:
        raise ValidationError("grid is empty")

    n_in = g("excitation.n_in", 10)
    exc_kw = dict(V0=g("excitation.v0", 0.0), phi=g("excitation.phi", 0.0), V_mid=g("excitation.v_mid", 1.65))
    if "excitation.v1" in vals:
        excitation = ExcitationSpec(V1=vals["excitation.v1"], **exc_kw)
    else:
        excitation = excitation_for_code(n_in, g("excitation.v_in_pp", 1.0), rheo, **exc_kw)

    env_seed = env.get(SEED_ENV)
    if env_seed is not None:
        try:
            env_seed = int(env_seed)
        except ValueError:
            raise ValidationError(f"{SEED_ENV} must be an integer, got {env_seed!r}") from None

    channels = []
    for cid in sorted(chans):
        c = {k: v for k, (v, _) in chans[cid].items()}
        if "table" in c:
            if any(k in c for k in ("r_s", "r_f", "c_dl")):
                raise ValidationError(f"channel {cid}: give either a table or r_s/r_f/c_dl")
            dut = _load_table(base_dir / c["table"])
        else:
            missing = [k for k in ("r_s", "r_f", "c_dl") if k not in c]
            if missing:
                raise ValidationError(f"channel {cid}: missing {', '.join(missing)}")
            dut = RandlesModel(c["r_s"], c["r_f"], c["c_dl"])
        seed = c.get("seed", cid)
        if env_seed is not None:
            seed = env_seed + cid
        channels.append(ChannelConfig(
            dut=dut,
            N_out=c.get("n_out", 100),
            N_out_assumed=c.get("n_out_assumed"),
            readout_sign=c.get("readout_sign", -1),
            noise_rms=c.get("noise_rms", 0.0),
            first_cycle_glitch=c.get("glitch", 0.0),
            rng_seed=seed,
            channel_id=cid,
        ))

    ref_seed = g("reference.seed", 0) if env_seed is None else env_seed
    return SweepConfig(
        grid=tuple(grid),
        channels=tuple(channels),
        clocks=clocks,
        excitation=excitation,
        N_in=n_in,
        cal=CalibrationConfig(g("cal.alpha", 1 / 600)),
        adc=AdcSpec(v_dd=g("adc.v_dd", 3.3), bits=g("adc.bits", 10), ideal=g("adc.ideal", False)),
        rheostat=rheo,
        controller_overhead_s=g("sweep.overhead_s", 0.1),
        ref_noise_rms=g("reference.noise_rms", 0.0),
        ref_seed=ref_seed,
    )
