"""Multichannel sweep orchestration and acquisition-time / capacity calculators."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from .afe import AdcSpec, ChannelConfig, RheostatSpec, channel_stream, reference_amplitude
from .dds import ExcitationSpec, reference_stream
from .errors import BandError, DegenerateError, ValidationError
from .freq_plan import ClockConfig, compute_fcw, plan_sampling
from .iq import select_frac_bits, stream_iq
from .spectrum import REFERENCE, WORKING, CalibrationConfig, SpectrumPoint, impedance_point, intermediary

CYCLES_PER_POINT = 2
MAX_CHANNELS = 8


def excitation_for_code(N_in: int = 10, v_in_pp: float = 1.0, rheo: RheostatSpec = RheostatSpec(), **kw) -> ExcitationSpec:
    """Excitation whose amplitude is set by the input rheostat stage."""
    return ExcitationSpec(V1=reference_amplitude(N_in, v_in_pp, rheo) / 2, **kw)


@dataclass(frozen=True)
class SweepConfig:
    grid: tuple
    channels: tuple
    clocks: ClockConfig = ClockConfig()
    excitation: ExcitationSpec = field(default_factory=excitation_for_code)
    N_in: int = 10
    cal: CalibrationConfig = CalibrationConfig()
    adc: AdcSpec = AdcSpec()
    rheostat: RheostatSpec = RheostatSpec()
    controller_overhead_s: float = 0.1
    ref_noise_rms: float = 0.0
    ref_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(float(f) for f in self.grid))
        object.__setattr__(self, "channels", tuple(self.channels))
        if not self.grid:
            raise ValidationError("grid is empty")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValidationError("grid must be strictly increasing")
        for f in self.grid:
            try:
                self.clocks.check_band(f)
            except BandError as e:
                raise ValidationError(f"grid point outside band: {e}") from None
        if not 1 <= len(self.channels) <= MAX_CHANNELS:
            raise ValidationError(f"need 1..{MAX_CHANNELS} working channels, got {len(self.channels)}")
        ids = [c.channel_id for c in self.channels]
        if len(set(ids)) != len(ids):
            raise ValidationError(f"duplicate channel ids: {ids}")
        if self.controller_overhead_s < 0:
            raise ValidationError("controller_overhead_s must be non-negative")

    @property
    def ideal_adc(self) -> bool:
        return self.adc.ideal


@dataclass
class SweepResult:
    points: list
    timing: float
    metadata: dict

    def channel(self, channel_id: int) -> list:
        return [p for p in self.points if p.channel_id == channel_id]

    def sorted_points(self) -> list:
        return sorted(self.points, key=lambda p: (p.f, p.channel_id))


def log_grid(f_lo: float, f_hi: float, n: int, clocks: ClockConfig = ClockConfig()) -> list:
    """``n`` log-spaced frequencies, both endpoints included exactly."""
    if not f_lo < f_hi:
        raise BandError(f"degenerate band [{f_lo}, {f_hi}]")
    if n < 2:
        raise ValueError("need at least two grid points")
    clocks.check_band(f_lo)
    clocks.check_band(f_hi)
    g = np.geomspace(f_lo, f_hi, n)
    g[0], g[-1] = f_lo, f_hi
    return [float(v) for v in g]


def acquisition_time(cfg: SweepConfig, quantized: bool = False) -> float:
    """Modeled sweep duration: two periods per point plus controller overhead.

    Periods use the requested frequencies unless ``quantized`` is set, in
    which case the DDS-realized ``f_q`` is used.
    """
    total = 0.0
    for f in cfg.grid:
        if quantized:
            f = float(compute_fcw(f, cfg.clocks)[1])
        total += CYCLES_PER_POINT / f
    return total + len(cfg.grid) * cfg.controller_overhead_s


def channel_capacity(throughput: float, pair_bytes: float) -> int:
    if throughput <= 0 or pair_bytes <= 0:
        raise ValueError("throughput and pair_bytes must be positive")
    return math.floor(throughput / pair_bytes)


def _measure_point(cfg: SweepConfig, index: int) -> list:
    f = cfg.grid[index]
    plan = plan_sampling(f, cfg.clocks)
    F = select_frac_bits(plan.P, cfg.adc.bits)
    last = CYCLES_PER_POINT - 1

    ref = reference_stream(cfg.excitation, plan, CYCLES_PER_POINT, cfg.adc, cfg.ref_noise_rms, cfg.ref_seed, index)
    iq_ref = stream_iq(ref, cycle=last, frac_bits=F)
    try:
        x_ref = intermediary(iq_ref, REFERENCE)
    except DegenerateError:
        x_ref = None

    out = []
    for ch in cfg.channels:
        s = channel_stream(ch, cfg.excitation, plan, CYCLES_PER_POINT, cfg.rheostat, cfg.adc, index)
        iq = stream_iq(s, cycle=last, frac_bits=F)
        common = dict(
            f=f, f_q=float(plan.f_q), channel_id=ch.channel_id,
            overflow=iq.overflow or iq_ref.overflow,
            # Only the reduced cycle matters; cycle 1 is discarded.
            clipped=ref.clipped_cycles[last] or s.clipped_cycles[last],
            i_acc=iq.I_scaled, q_acc=iq.Q_scaled, P=float(plan.P),
        )
        try:
            x_ch = intermediary(iq, WORKING if ch.readout_sign < 0 else REFERENCE)
            if x_ref is None:
                raise DegenerateError("reference response is zero")
            out.append(impedance_point(x_ref, x_ch, ch.r_out_assumed(cfg.rheostat), cfg.cal, **common))
        except DegenerateError:
            nan = float("nan")
            out.append(SpectrumPoint(z_mag_raw=nan, z_phase=nan, z_mag_cal=nan, **common))
    return out


def run_sweep(cfg: SweepConfig, workers: int = 1) -> SweepResult:
    """Acquire every grid point on every channel.

    Frequencies are independent work items; with ``workers > 1`` they run on
    a thread pool. Noise generators are keyed on (seed, grid index), so the
    result is identical for any schedule.
    """
    for f in cfg.grid:
        select_frac_bits(plan_sampling(f, cfg.clocks).P, cfg.adc.bits)

    idx = range(len(cfg.grid))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_freq = list(pool.map(lambda i: _measure_point(cfg, i), idx))
    else:
        per_freq = [_measure_point(cfg, i) for i in idx]

    points = [p for group in per_freq for p in group]
    return SweepResult(points, acquisition_time(cfg, quantized=True), _echo(cfg))


def _echo(cfg: SweepConfig) -> dict:
    d = asdict(cfg)
    for ch, src in zip(d["channels"], cfg.channels):
        ch["dut"] = {"type": type(src.dut).__name__, **ch["dut"]}
    return d
