"""Per-frequency acquisition schedule.

All timing quantities are carried as :class:`fractions.Fraction` so that the
samples-per-period ratio, and hence the quarter-cycle boundaries, are exact.
Float inputs are converted with ``Fraction(x)`` which keeps their binary value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BandError, PlanError

# Lower band edge is f_dds_clk / 2**31 regardless of the FCW width.
DDS_FLOOR_BITS = 31


def round_half_up(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


@dataclass(frozen=True)
class ClockConfig:
    f_s: float = 200e3
    f_clk: float = 50e6
    f_dds_clk: float = 100e6
    M: int = 32

    def __post_init__(self):
        for name in ("f_s", "f_clk", "f_dds_clk"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")
        if not 16 <= self.M <= 48:
            raise ValueError(f"M={self.M} outside [16, 48]")
        if self.f_clk < 100 * self.f_s:
            raise ValueError("f_clk must be at least 100 * f_s to keep the divider error negligible")

    @property
    def f_min(self) -> Fraction:
        return Fraction(self.f_dds_clk) / 2**DDS_FLOOR_BITS

    @property
    def f_max(self) -> Fraction:
        return Fraction(self.f_s) / 4

    def check_band(self, f_i: float) -> None:
        f = Fraction(f_i)
        if f < self.f_min or f > self.f_max:
            raise BandError(
                f"f_i={float(f_i):g} Hz outside band [{float(self.f_min):.6g}, {float(self.f_max):.6g}] Hz"
            )


@dataclass(frozen=True)
class SamplingPlan:
    f_i: float
    m: int
    f_q: Fraction
    f_s_prime: Fraction
    k: int
    f_hat_s: Fraction
    f_epsilon: Fraction
    P: Fraction
    n_cycle: int

    @property
    def samples_per_period(self) -> float:
        return float(self.P)


@dataclass(frozen=True)
class QuarterBoundary:
    j: int
    idx: int
    rho: Fraction

    @property
    def position(self) -> Fraction:
        return self.idx + self.rho


def compute_fcw(f_i: float, clocks: ClockConfig, check: bool = True) -> tuple[int, Fraction]:
    """Quantize ``f_i`` to the nearest DDS frequency control word.

    Returns ``(m, f_q)`` where ``f_q = m * f_dds_clk / 2**M`` is the frequency
    the DDS actually produces. ``check=False`` skips the band test.
    """
    if check:
        clocks.check_band(f_i)
    scale = Fraction(2**clocks.M) / Fraction(clocks.f_dds_clk)
    m = round_half_up(Fraction(f_i) * scale)
    if m < 1:
        raise BandError(f"f_i={f_i:g} Hz rounds to a zero frequency control word")
    return m, m / scale


def plan_sampling(f_i: float, clocks: ClockConfig) -> SamplingPlan:
    m, f_q = compute_fcw(f_i, clocks)
    fi = Fraction(f_i)
    fs = Fraction(clocks.f_s)

    per_period = math.floor(fs / fi)
    if per_period % 4 == 0:
        f_s_prime = per_period * fi
    else:
        f_s_prime = math.floor(fs / (4 * fi)) * 4 * fi
    if f_s_prime == 0:
        raise PlanError(f"cannot fit 4 samples per period at f_i={f_i:g} Hz")

    f_clk = Fraction(clocks.f_clk)
    k = max(1, round_half_up(f_clk / f_s_prime))
    f_hat_s = f_clk / k
    P = f_hat_s / f_q
    return SamplingPlan(
        f_i=f_i,
        m=m,
        f_q=f_q,
        f_s_prime=f_s_prime,
        k=k,
        f_hat_s=f_hat_s,
        f_epsilon=abs(f_hat_s - f_s_prime),
        P=P,
        n_cycle=math.ceil(P),
    )


def quarter_boundaries(period) -> list[QuarterBoundary]:
    """Boundaries ``j * P / 4`` for ``j = 0..4`` split into index and residue.

    ``period`` is a :class:`SamplingPlan` or anything ``Fraction`` accepts.
    """
    P = period.P if isinstance(period, SamplingPlan) else Fraction(period)
    out = []
    for j in range(5):
        b = j * P / 4
        idx = math.floor(b)
        out.append(QuarterBoundary(j, idx, b - idx))
    return out


def cycle_phase(P: Fraction, n_samples: int) -> np.ndarray:
    """Excitation phase ``2*pi*n/P`` (radians) for ``n = 0..n_samples-1``.

    Each sample's phase is computed directly from ``n`` and the exact ratio,
    never by accumulating a float step, so the error stays at one ulp.
    """
    inv = float(1 / Fraction(P))
    return (2 * np.pi) * (np.arange(n_samples, dtype=np.float64) * inv)
