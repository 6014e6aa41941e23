"""Impedance recovery from I/Q pairs, plus an independent single-bin DFT oracle."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .afe import SampleStream
from .errors import DegenerateError, LengthError
from .iq import IQAccumulator

REFERENCE = "reference"
WORKING = "working"


@dataclass(frozen=True)
class CalibrationConfig:
    alpha: float = 1 / 600

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")


@dataclass(frozen=True)
class ComplexResponse:
    X: complex
    role: str = REFERENCE

    @property
    def angle_deg(self) -> float:
        return math.degrees(cmath.phase(self.X))


@dataclass(frozen=True)
class SpectrumPoint:
    f: float
    f_q: float
    channel_id: int
    z_mag_raw: float
    z_phase: float
    z_mag_cal: float
    overflow: bool = False
    clipped: bool = False
    i_acc: float = float("nan")
    q_acc: float = float("nan")
    P: float = float("nan")

    @property
    def z_complex(self) -> complex:
        return cmath.rect(self.z_mag_raw, math.radians(self.z_phase))


def wrap_degrees(deg: float) -> float:
    """Wrap to (-180, 180]."""
    w = math.fmod(deg + 180.0, 360.0)
    if w <= 0:
        w += 360.0
    return w - 180.0


def intermediary(iq: IQAccumulator, role: str = REFERENCE) -> ComplexResponse:
    """``X = I - jQ``, negated for working channels to undo the inverting readout."""
    if role not in (REFERENCE, WORKING):
        raise ValueError(f"unknown role {role!r}")
    X = complex(iq.I_scaled, -iq.Q_scaled)
    if X == 0:
        raise DegenerateError("zero I/Q pair: open circuit or dead channel")
    if role == WORKING:
        X = -X
    return ComplexResponse(X, role)


def impedance_point(
    x_ref: ComplexResponse,
    x_ch: ComplexResponse,
    R_out: float,
    cal: CalibrationConfig = CalibrationConfig(),
    *,
    f: float = float("nan"),
    f_q: float = float("nan"),
    channel_id: int = 0,
    overflow: bool = False,
    clipped: bool = False,
    i_acc: float = float("nan"),
    q_acc: float = float("nan"),
    P: float = float("nan"),
) -> SpectrumPoint:
    if R_out <= 0:
        raise ValueError("R_out must be positive")
    if abs(x_ch.X) == 0:
        raise DegenerateError("working-channel response has zero magnitude")
    mag = R_out * abs(x_ref.X) / abs(x_ch.X)
    phase = wrap_degrees(math.degrees(cmath.phase(x_ref.X)) - math.degrees(cmath.phase(x_ch.X)))
    return SpectrumPoint(
        f=f, f_q=f_q, channel_id=channel_id,
        z_mag_raw=mag, z_phase=phase, z_mag_cal=cal.alpha * mag,
        overflow=overflow, clipped=clipped, i_acc=i_acc, q_acc=q_acc, P=P,
    )


def dft_oracle(stream: SampleStream, cycle: int = -1) -> tuple[float, float]:
    """Amplitude (codes) and phase (degrees) of the excitation-frequency component.

    For an integer period this is the single-bin correlation
    ``C = sum x cos(2 pi n/P)``, ``S = sum x sin(2 pi n/P)`` with amplitude
    ``2*hypot(C, S)/P``. For a fractional period the bin is no longer
    orthogonal to DC, so the same three unknowns (offset, cos, sin) are solved
    by least squares over the cycle's samples. The phase follows
    :func:`intermediary`: a sine of phase ``phi`` reads ``phi``.
    """
    n_cycle = stream.n_cycle
    if n_cycle < 1 or len(stream.codes) < n_cycle:
        raise LengthError("stream shorter than one cycle")
    P = Fraction(stream.period)
    x = np.asarray(stream.cycle(cycle), dtype=np.float64)
    n = np.arange(n_cycle, dtype=np.int64)

    num, den = P.numerator, P.denominator
    if num < 2**62 and den * n_cycle < 2**62:
        turns = (n * den % num) / num  # exact reduction of n/P
    else:
        turns = np.mod(n * float(1 / P), 1.0)
    ang = 2 * np.pi * turns
    c, s = np.cos(ang), np.sin(ang)

    if den == 1:
        C = float(np.dot(x, c))
        S = float(np.dot(x, s))
        return 2 * math.hypot(C, S) / num, math.degrees(math.atan2(C, S))

    if n_cycle < 3:
        raise LengthError("need at least 3 samples for a fractional-period fit")
    A = np.column_stack([np.ones(n_cycle), c, s])
    (_, b_cos, b_sin), *_ = np.linalg.lstsq(A, x, rcond=None)
    return math.hypot(b_cos, b_sin), math.degrees(math.atan2(b_cos, b_sin))
