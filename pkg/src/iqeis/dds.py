"""DDS excitation source sampled at the ADC instants of a plan."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .afe import AdcSpec, SampleStream, noise_generator
from .freq_plan import SamplingPlan, cycle_phase

# Small-signal linearity limit on the peak-to-peak excitation, volts.
LINEAR_LIMIT_PP = 0.05


@dataclass(frozen=True)
class ExcitationSpec:
    V0: float = 0.0
    V1: float = 0.02
    phi: float = 0.0
    V_mid: float = 1.65

    def __post_init__(self):
        if self.V1 < 0:
            raise ValueError("V1 must be non-negative")
        if self.V_mid < 0:
            raise ValueError("V_mid must be non-negative")
        if 2 * self.V1 > LINEAR_LIMIT_PP:
            warnings.warn(
                f"excitation {2 * self.V1 * 1e3:.1f} mVpp exceeds the {LINEAR_LIMIT_PP * 1e3:.0f} mVpp "
                "small-signal limit",
                stacklevel=3,
            )


def excitation_sample(spec: ExcitationSpec, plan: SamplingPlan, n: int) -> float:
    if not 0 <= n <= plan.n_cycle:
        raise IndexError(f"sample {n} outside [0, {plan.n_cycle}]")
    # Reduce n/P exactly before going to float.
    turns = Fraction(n) / plan.P
    turns -= math.floor(turns)
    return spec.V0 + spec.V1 * math.sin(2 * math.pi * float(turns) + spec.phi)


def excitation_cycle(spec: ExcitationSpec, plan: SamplingPlan) -> np.ndarray:
    return spec.V0 + spec.V1 * np.sin(cycle_phase(plan.P, plan.n_cycle) + spec.phi)


def reference_stream(
    spec: ExcitationSpec,
    plan: SamplingPlan,
    cycles: int = 2,
    adc: AdcSpec = AdcSpec(),
    noise_rms: float = 0.0,
    seed: int = 0,
    stream_key: int = 0,
) -> SampleStream:
    """Reference channel: mid-rail elevated excitation, digitized.

    Clipping is reported through the stream flags, never raised.
    """
    if cycles < 1:
        raise ValueError("cycles must be >= 1")
    volts = np.tile(spec.V_mid + excitation_cycle(spec, plan), cycles)
    if noise_rms > 0:
        volts += noise_generator(seed, stream_key).normal(0.0, noise_rms, volts.size)
    return SampleStream.from_volts(volts, adc, plan.P, plan.n_cycle, cycles, channel_id=0, plan=plan)
