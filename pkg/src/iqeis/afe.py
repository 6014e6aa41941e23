"""Analog front end: DUT models, rheostats, transimpedance readout and the ADC."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .errors import RangeError, SaturationError
from .freq_plan import SamplingPlan, cycle_phase

RHEOSTAT_STEPS = 127


@dataclass(frozen=True)
class RandlesModel:
    """Series resistance followed by a parallel R_F || C_dl branch."""

    R_S: float
    R_F: float
    C_dl: float

    def __post_init__(self):
        if not (self.R_S > 0 and self.R_F > 0 and self.C_dl > 0):
            raise ValueError("Randles components must be strictly positive")

    @property
    def omega_c(self) -> float:
        return 1.0 / (self.R_F * self.C_dl)

    @property
    def f_corner(self) -> float:
        return self.omega_c / (2 * math.pi)

    def impedance(self, omega):
        return randles_impedance(self, omega)


@dataclass(frozen=True)
class TableModel:
    """Tabulated impedance, interpolated linearly in log-frequency.

    Real and imaginary parts are interpolated independently; outside the
    table the end values are held.
    """

    freqs: tuple
    z: tuple

    def __post_init__(self):
        f = np.asarray(self.freqs, dtype=float)
        if f.ndim != 1 or len(f) < 2 or len(f) != len(self.z):
            raise ValueError("table needs at least two (f, Z) pairs")
        if np.any(f <= 0) or np.any(np.diff(f) <= 0):
            raise ValueError("table frequencies must be positive and strictly increasing")

    def impedance(self, omega):
        logf = np.log(np.asarray(omega, dtype=float) / (2 * np.pi))
        logt = np.log(np.asarray(self.freqs, dtype=float))
        z = np.asarray(self.z, dtype=complex)
        out = np.interp(logf, logt, z.real) + 1j * np.interp(logf, logt, z.imag)
        return complex(out) if np.ndim(out) == 0 else out


DutModel = Union[RandlesModel, TableModel]


def randles_impedance(model: RandlesModel, omega):
    """``R_S + R_F / (1 + j*omega*R_F*C_dl)``; accepts scalars or arrays, ``omega=inf`` gives R_S."""
    w = np.asarray(omega, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        branch = np.where(np.isinf(w), 0.0, model.R_F / (1 + 1j * w * model.R_F * model.C_dl))
    z = model.R_S + branch
    return complex(z) if z.ndim == 0 else z


@dataclass(frozen=True)
class RheostatSpec:
    R_max: float = 50e3
    R_min: float = 100.0
    R_A: float = 100e3

    def __post_init__(self):
        if not 0 < self.R_min < self.R_max:
            raise ValueError("need 0 < R_min < R_max")
        if self.R_A <= 0:
            raise ValueError("R_A must be positive")


def _check_code(N: int) -> int:
    if isinstance(N, bool) or int(N) != N or not 0 <= N <= RHEOSTAT_STEPS:
        raise RangeError(f"rheostat code {N!r} outside 7-bit range [0, {RHEOSTAT_STEPS}]")
    return int(N)


def rheostat_resistance(N: int, spec: RheostatSpec = RheostatSpec()) -> float:
    N = _check_code(N)
    return spec.R_min + spec.R_max * N / RHEOSTAT_STEPS


def reference_amplitude(N_in: int, V_in_pp: float, spec: RheostatSpec = RheostatSpec()) -> float:
    """Peak-to-peak reference swing after the inverting gain stage ``R_in / R_A``."""
    return rheostat_resistance(N_in, spec) / spec.R_A * V_in_pp


@dataclass(frozen=True)
class AdcSpec:
    v_dd: float = 3.3
    bits: int = 10
    # Bypass rounding and clamping; codes become real-valued.
    ideal: bool = False

    def __post_init__(self):
        if self.v_dd <= 0:
            raise ValueError("v_dd must be positive")
        if not 1 <= self.bits <= 24:
            raise ValueError("bits must be in [1, 24]")

    @property
    def full_scale(self) -> int:
        return 2**self.bits - 1


def adc_quantize(v: float, V_dd: float = 3.3, bits: int = 10) -> tuple[int, bool]:
    top = 2**bits - 1
    code = math.floor(v / V_dd * top + 0.5)
    clipped = code < 0 or code > top
    return min(max(code, 0), top), clipped


def quantize_array(v: np.ndarray, adc: AdcSpec) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`adc_quantize`. Returns ``(codes, clip_mask)``."""
    top = adc.full_scale
    scaled = v * (top / adc.v_dd)
    if adc.ideal:
        return scaled, (scaled < 0) | (scaled > top)
    scaled += 0.5
    np.floor(scaled, out=scaled)
    clip = (scaled < 0) | (scaled > top)
    np.clip(scaled, 0, top, out=scaled)
    return scaled.astype(np.int64), clip


@dataclass
class SampleStream:
    """Consecutive acquisition cycles of ADC codes for one channel.

    Acquisition is re-armed at the start of every cycle, so sample ``n`` of
    any cycle sits at phase ``2*pi*n/P`` of the excitation.
    """

    codes: np.ndarray
    period: Fraction
    n_cycle: int
    cycles: int = 1
    bits: int = 10
    channel_id: int = 0
    clipped_cycles: tuple = ()
    plan: Optional[SamplingPlan] = None

    def __post_init__(self):
        if len(self.codes) != self.cycles * self.n_cycle:
            raise ValueError("stream length must equal cycles * n_cycle")
        if not self.clipped_cycles:
            self.clipped_cycles = (False,) * self.cycles

    @property
    def clipped(self) -> bool:
        return any(self.clipped_cycles)

    @property
    def ideal(self) -> bool:
        return not np.issubdtype(self.codes.dtype, np.integer)

    def cycle(self, i: int) -> np.ndarray:
        if i < 0:
            i += self.cycles
        return self.codes[i * self.n_cycle:(i + 1) * self.n_cycle]

    @classmethod
    def from_volts(cls, volts, adc: AdcSpec, period, n_cycle, cycles=1, channel_id=0, plan=None):
        codes, clip = quantize_array(np.asarray(volts, dtype=float), adc)
        per_cycle = tuple(bool(c.any()) for c in np.split(clip, cycles))
        return cls(codes, Fraction(period), n_cycle, cycles, adc.bits, channel_id, per_cycle, plan)


@dataclass(frozen=True)
class ChannelConfig:
    dut: DutModel
    N_out: int = 100
    readout_sign: int = -1
    noise_rms: float = 0.0
    first_cycle_glitch: float = 0.0
    rng_seed: int = 0
    channel_id: int = 0
    # Code the controller believes is loaded; None means the true N_out.
    N_out_assumed: Optional[int] = None

    def __post_init__(self):
        _check_code(self.N_out)
        if self.N_out_assumed is not None:
            _check_code(self.N_out_assumed)
        if self.readout_sign not in (-1, 1):
            raise ValueError("readout_sign must be -1 or +1")
        if self.noise_rms < 0:
            raise ValueError("noise_rms must be non-negative")

    def r_out(self, rheo: RheostatSpec = RheostatSpec()) -> float:
        return rheostat_resistance(self.N_out, rheo)

    def r_out_assumed(self, rheo: RheostatSpec = RheostatSpec()) -> float:
        code = self.N_out if self.N_out_assumed is None else self.N_out_assumed
        return rheostat_resistance(code, rheo)


def noise_generator(seed: int, stream_key: int = 0) -> np.random.Generator:
    """Generator for one (channel, frequency) pair, independent of scheduling."""
    return np.random.default_rng([int(seed), int(stream_key)])


def channel_stream(
    ch: ChannelConfig,
    spec,
    plan: SamplingPlan,
    cycles: int = 2,
    rheo: RheostatSpec = RheostatSpec(),
    adc: AdcSpec = AdcSpec(),
    stream_key: int = 0,
) -> SampleStream:
    """Digitized transimpedance output of one working electrode.

    The DUT current is the steady-state phasor response at the quantized DDS
    frequency. ``first_cycle_glitch`` is added to cycle 1 only. Noise is drawn
    from a generator keyed on ``(ch.rng_seed, stream_key)``.
    """
    if cycles < 1:
        raise ValueError("cycles must be >= 1")
    omega = 2 * math.pi * float(plan.f_q)
    z = complex(ch.dut.impedance(omega))
    amp = ch.r_out(rheo) * spec.V1 / abs(z)
    theta = math.atan2(z.imag, z.real)

    one = spec.V_mid + ch.readout_sign * amp * np.sin(cycle_phase(plan.P, plan.n_cycle) + (spec.phi - theta))
    volts = np.tile(one, cycles)
    if ch.noise_rms > 0:
        volts += noise_generator(ch.rng_seed, stream_key).normal(0.0, ch.noise_rms, volts.size)
    if ch.first_cycle_glitch:
        volts[:plan.n_cycle] += ch.first_cycle_glitch

    stream = SampleStream.from_volts(volts, adc, plan.P, plan.n_cycle, cycles, ch.channel_id, plan)
    if all(stream.clipped_cycles):
        _, clip = quantize_array(volts, adc)
        if clip.all():
            raise SaturationError(f"channel {ch.channel_id}: every sample clipped (N_out={ch.N_out})")
    return stream
