"""Ground-truth comparison, per-decade summaries and corner-frequency extraction."""

from __future__ import annotations

import cmath
import math
import statistics
from collections import defaultdict
from dataclasses import dataclass, field

from .afe import RandlesModel
from .errors import MissingGroundTruth
from .spectrum import wrap_degrees
from .sweep import SweepConfig, SweepResult

# Exact-ADC runs: per-point limits, looser near the sampling limit.
P_WELL_SAMPLED = 64
MAG_TOL = 0.02
PHASE_TOL_DEG = 2.0
MAG_TOL_NEAR_NYQUIST = 0.10
PHASE_TOL_NEAR_NYQUIST_DEG = 5.0
# Quantized runs: limits on the medians over the grid.
MEDIAN_MAG_TOL = 0.05
MEDIAN_PHASE_TOL_DEG = 3.0


@dataclass
class RunReport:
    records: list
    summary: list
    ideal_adc: bool
    passed: bool
    failures: list = field(default_factory=list)


def _truth(dut, f_q: float) -> complex:
    if not isinstance(dut, RandlesModel):
        raise MissingGroundTruth(f"no analytic model for {type(dut).__name__}")
    return complex(dut.impedance(2 * math.pi * f_q))


def build_report(cfg: SweepConfig, result: SweepResult) -> RunReport:
    duts = {c.channel_id: c.dut for c in cfg.channels}
    for cid, dut in duts.items():
        if not isinstance(dut, RandlesModel):
            raise MissingGroundTruth(f"channel {cid} uses a {type(dut).__name__} without an analytic reference")

    records, failures = [], []
    for p in result.sorted_points():
        z = _truth(duts[p.channel_id], p.f_q)
        true_mag, true_phase = abs(z), math.degrees(cmath.phase(z))
        mag_err = p.z_mag_raw / true_mag - 1
        ph_err = wrap_degrees(p.z_phase - true_phase)
        well = p.P >= P_WELL_SAMPLED
        rec = dict(
            freq_hz=p.f, freq_actual_hz=p.f_q, channel=p.channel_id, P=p.P,
            zmag_ohm_raw=p.z_mag_raw, zphase_deg=p.z_phase,
            zmag_true_ohm=true_mag, zphase_true_deg=true_phase,
            mag_rel_err=mag_err, phase_err_deg=ph_err,
            well_sampled=well,
        )
        if cfg.ideal_adc:
            mtol = MAG_TOL if well else MAG_TOL_NEAR_NYQUIST
            ptol = PHASE_TOL_DEG if well else PHASE_TOL_NEAR_NYQUIST_DEG
            ok = abs(mag_err) <= mtol and abs(ph_err) <= ptol
            rec["pass"] = ok
            if not ok:
                failures.append(f"ch{p.channel_id} f={p.f:.6g} Hz: |Z| err {mag_err:+.3%}, phase err {ph_err:+.3f} deg")
        records.append(rec)

    if not cfg.ideal_adc:
        for cid in sorted(duts):
            recs = [r for r in records if r["channel"] == cid]
            med_m = statistics.median(abs(r["mag_rel_err"]) for r in recs)
            med_p = statistics.median(abs(r["phase_err_deg"]) for r in recs)
            if not (med_m <= MEDIAN_MAG_TOL and med_p <= MEDIAN_PHASE_TOL_DEG):
                failures.append(f"ch{cid}: median |Z| err {med_m:.3%}, median phase err {med_p:.3f} deg")
        for r in records:
            r["pass"] = not any(s.startswith(f"ch{r['channel']}:") for s in failures)

    return RunReport(records, summarize(records), cfg.ideal_adc, not failures, failures)


def summarize(records: list) -> list:
    """Median and max absolute errors per (channel, decade of f_q)."""
    groups = defaultdict(list)
    for r in records:
        groups[(r["channel"], math.floor(math.log10(r["freq_actual_hz"])))].append(r)
    rows = []
    for (ch, dec), recs in sorted(groups.items()):
        m = [abs(r["mag_rel_err"]) for r in recs]
        ph = [abs(r["phase_err_deg"]) for r in recs]
        rows.append(dict(
            channel=ch, decade=dec, n=len(recs),
            median_mag_rel_err=statistics.median(m), max_mag_rel_err=max(m),
            median_phase_err_deg=statistics.median(ph), max_phase_err_deg=max(ph),
        ))
    return rows


def corner_frequency(points: list, compensate_series: bool = True) -> float:
    """Frequency where the (optionally series-compensated) phase crosses -45 deg.

    With ``compensate_series`` the high-frequency limit of Re(Z), read from
    the highest-frequency point, is subtracted before taking the phase, so
    the crossing sits at the R_F*C_dl corner even when R_S is comparable to
    R_F. Linear interpolation in log-frequency between bracketing points.
    Returns NaN if no crossing exists.
    """
    pts = sorted((p for p in points if math.isfinite(p.z_mag_raw)), key=lambda p: p.f_q)
    z = [p.z_complex for p in pts]
    if compensate_series:
        r_inf = z[-1].real
        z = [v - r_inf for v in z]
    phases = [math.degrees(cmath.phase(v)) for v in z]
    for (p0, a0), (p1, a1) in zip(zip(pts, phases), zip(pts[1:], phases[1:])):
        if a0 > -45.0 >= a1:
            t = (a0 + 45.0) / (a0 - a1)
            return 10 ** (math.log10(p0.f_q) + t * (math.log10(p1.f_q) - math.log10(p0.f_q)))
    return float("nan")
