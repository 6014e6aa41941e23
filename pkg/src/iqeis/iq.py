"""Quarter-cycle integration and I/Q formation under 32-bit fixed-point rules.

The accumulator is a 32-bit signed register whose low ``frac_bits`` bits hold
the fractional part contributed by residue-weighted edge samples. Each sample
is treated as the value of the signal over the one-sample cell centred on its
instant; a quarter sum is the exact integral of that staircase between two
quarter boundaries. When a boundary falls inside a cell, only the covered
fraction of that sample is counted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .afe import SampleStream
from .errors import LengthError, PlanError
from .freq_plan import QuarterBoundary, quarter_boundaries, round_half_up

ACC_BITS = 32
ACC_MAX = 2 ** (ACC_BITS - 1) - 1
ACC_MIN = -(2 ** (ACC_BITS - 1))
DEFAULT_FRAC_BITS = 8
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class QuarterSums:
    S: tuple
    boundaries: tuple
    frac_bits: int = 0
    # Raw register contents (value * 2**frac_bits); None for real-valued streams.
    raw: Optional[tuple] = None
    overflow: bool = False
    f_hat_s: Optional[Fraction] = None


@dataclass(frozen=True)
class IQAccumulator:
    I_scaled: float
    Q_scaled: float
    f_hat_s: Optional[Fraction] = None
    overflow: bool = False

    @property
    def I(self) -> float:
        """In-phase integral in code-seconds (requires ``f_hat_s``)."""
        return self.I_scaled / float(self.f_hat_s)

    @property
    def Q(self) -> float:
        return self.Q_scaled / float(self.f_hat_s)


def overflow_budget(bits: int = 10, frac_bits: int = DEFAULT_FRAC_BITS) -> float:
    """Supremum of P for which a full-scale quarter sum fits the register.

    A plan is safe when ``P`` is strictly below the returned value.
    """
    return 4 * 2.0 ** (ACC_BITS - 1 - frac_bits) / (2**bits - 1)


def select_frac_bits(P, bits: int = 10) -> int:
    """Fractional bits for a plan: 8 when they fit, else pure-integer mode."""
    P = float(P)
    if P < overflow_budget(bits, DEFAULT_FRAC_BITS):
        return DEFAULT_FRAC_BITS
    if P < overflow_budget(bits, 0):
        return 0
    raise PlanError(f"P={P:.6g} exceeds the 32-bit accumulator budget even with 0 fractional bits")


def _saturate(v: int) -> tuple[int, bool]:
    if v > ACC_MAX:
        return ACC_MAX, True
    if v < ACC_MIN:
        return ACC_MIN, True
    return v, False


def _cells(boundaries: Sequence[QuarterBoundary]):
    # Shift by half a sample so each sample's cell is centred on its instant.
    out = []
    for b in boundaries:
        c = b.position + HALF
        idx = math.floor(c)
        out.append((idx, c - idx))
    return out


def quarter_sums(
    stream: SampleStream,
    boundaries: Optional[Sequence[QuarterBoundary]] = None,
    frac_bits: Optional[int] = None,
    cycle: int = -1,
) -> QuarterSums:
    """Integrate one cycle of ``stream`` over its four quarters.

    ``cycle`` selects which acquired cycle is reduced (default: the last).
    Integer code streams use saturating fixed-point arithmetic; real-valued
    (ideal ADC) streams are summed in float64 and never flag overflow.
    """
    n = stream.n_cycle
    if n < 1 or len(stream.codes) < n:
        raise LengthError(f"stream of {len(stream.codes)} samples is shorter than one cycle ({n})")
    if boundaries is None:
        boundaries = quarter_boundaries(stream.period)
    boundaries = tuple(boundaries)
    x = stream.cycle(cycle)
    cells = _cells(boundaries)
    if cells[-1][0] > n:
        raise LengthError("quarter boundaries extend past the acquired cycle")

    def at(i):
        # The sample after the last one is the first sample of the next (re-armed) cycle.
        return x[i % n]

    f_hat_s = stream.plan.f_hat_s if stream.plan is not None else None

    if stream.ideal:
        S = []
        for (a, ra), (b, rb) in zip(cells[:-1], cells[1:]):
            s = float(np.sum(x[a:b]))
            if ra:
                s -= float(ra) * float(at(a))
            if rb:
                s += float(rb) * float(at(b))
            S.append(s)
        return QuarterSums(tuple(S), boundaries, 0, None, False, f_hat_s)

    F = select_frac_bits(stream.period, stream.bits) if frac_bits is None else frac_bits
    one = 1 << F
    raw, overflow = [], False
    for (a, ra), (b, rb) in zip(cells[:-1], cells[1:]):
        v = int(np.sum(x[a:b], dtype=np.int64)) * one
        if ra:
            v -= round_half_up(ra * int(at(a)) * one)
        if rb:
            v += round_half_up(rb * int(at(b)) * one)
        v, ov = _saturate(v)
        overflow |= ov
        raw.append(v)
    S = tuple(r / one for r in raw)
    return QuarterSums(S, boundaries, F, tuple(raw), overflow, f_hat_s)


def iq_from_sums(sums: QuarterSums) -> IQAccumulator:
    """Combine quarter sums into the ``f_hat_s``-scaled I/Q pair.

    I = (S0 + S1 - S2 - S3) / 2 and Q = (S1 + S2 - S0 - S3) / 2. The halving
    is applied as a binary-point shift, so it is exact.
    """
    if sums.raw is None:
        s0, s1, s2, s3 = sums.S
        return IQAccumulator((s0 + s1 - s2 - s3) / 2, (s1 + s2 - s0 - s3) / 2, sums.f_hat_s, sums.overflow)

    r0, r1, r2, r3 = sums.raw
    overflow = sums.overflow

    def diff(p, q, u, v):
        nonlocal overflow
        a, o1 = _saturate(p + q)
        b, o2 = _saturate(u + v)
        d, o3 = _saturate(a - b)
        overflow |= o1 or o2 or o3
        return d

    i_raw = diff(r0, r1, r2, r3)
    q_raw = diff(r1, r2, r0, r3)
    scale = 2.0 ** (sums.frac_bits + 1)
    return IQAccumulator(i_raw / scale, q_raw / scale, sums.f_hat_s, overflow)


def stream_iq(stream: SampleStream, cycle: int = -1, frac_bits: Optional[int] = None) -> IQAccumulator:
    return iq_from_sums(quarter_sums(stream, frac_bits=frac_bits, cycle=cycle))
