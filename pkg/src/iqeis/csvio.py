"""CSV emission and parsing for sweep and verification outputs."""

from __future__ import annotations

import csv

SWEEP_COLUMNS = (
    "freq_hz", "freq_actual_hz", "channel", "zmag_ohm_raw", "zmag_ohm_cal",
    "zphase_deg", "i_acc", "q_acc", "clipped", "overflow",
)

REPORT_COLUMNS = (
    "freq_hz", "freq_actual_hz", "channel", "P", "zmag_ohm_raw", "zphase_deg",
    "zmag_true_ohm", "zphase_true_deg", "mag_rel_err", "phase_err_deg", "pass",
)


def fmt(v) -> str:
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, int):
        return str(v)
    return f"{v:.9g}"


def write_sweep_csv(result, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for p in result.sorted_points():
            w.writerow(fmt(v) for v in (
                p.f, p.f_q, p.channel_id, p.z_mag_raw, p.z_mag_cal,
                p.z_phase, p.i_acc, p.q_acc, p.clipped, p.overflow,
            ))


def read_sweep_csv(path) -> list:
    rows = []
    with open(path, newline="") as fh:
        r = csv.DictReader(fh)
        if tuple(r.fieldnames or ()) != SWEEP_COLUMNS:
            raise ValueError(f"unexpected columns {r.fieldnames}")
        for row in r:
            rec = {k: float(v) for k, v in row.items()}
            rec["channel"] = int(row["channel"])
            rec["clipped"] = row["clipped"] == "1"
            rec["overflow"] = row["overflow"] == "1"
            rows.append(rec)
    return rows


def write_report_csv(report, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(REPORT_COLUMNS)
        for rec in report.records:
            w.writerow(fmt(rec[c]) for c in REPORT_COLUMNS)
