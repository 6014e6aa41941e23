"""Command-line entry point: ``iqeis plan|sweep|verify|capacity``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import csvio
from .config import parse_config
from .errors import BandError, IQEISError, MissingGroundTruth, ParseError, PlanError, ValidationError
from .freq_plan import ClockConfig, plan_sampling
from .iq import DEFAULT_FRAC_BITS, overflow_budget, select_frac_bits
from .report import build_report
from .sweep import channel_capacity, run_sweep

log = logging.getLogger("iqeis")

EXIT_FAIL = 1
EXIT_USAGE = 2


def cmd_plan(args) -> int:
    clocks = ClockConfig(f_s=args.f_s, f_clk=args.f_clk, f_dds_clk=args.f_dds_clk, M=args.m)
    try:
        plan = plan_sampling(args.freq, clocks)
    except BandError as e:
        print(f"BandError: {e}", file=sys.stderr)
        return EXIT_USAGE
    lines = [
        ("f_i", f"{plan.f_i:.9g} Hz"),
        ("m (FCW)", str(plan.m)),
        ("f_q", f"{float(plan.f_q):.9g} Hz"),
        ("f_s'", f"{float(plan.f_s_prime):.9g} Hz"),
        ("k", str(plan.k)),
        ("f_hat_s", f"{float(plan.f_hat_s):.9g} Hz"),
        ("f_epsilon", f"{float(plan.f_epsilon):.9g} Hz"),
        ("P", f"{float(plan.P):.9g} ({plan.P.numerator}/{plan.P.denominator})"),
        ("n_cycle", str(plan.n_cycle)),
    ]
    try:
        F = select_frac_bits(plan.P, args.bits)
        verdict = f"OK, F = {F} ({'fractional edge terms' if F else 'integer-only mode'}); " \
                  f"max P = {overflow_budget(args.bits, F):.6g}"
    except PlanError as e:
        verdict = f"EXCEEDED: {e}"
        F = None
    lines.append(("overflow budget", verdict))
    width = max(len(k) for k, _ in lines)
    for k, v in lines:
        print(f"{k:<{width}}  {v}")
    return 0 if F is not None else EXIT_FAIL


def _load(args):
    return parse_config(args.config)


def cmd_sweep(args) -> int:
    cfg = _load(args)
    result = run_sweep(cfg, workers=args.workers)
    csvio.write_sweep_csv(result, args.out)
    log.info("wrote %d rows to %s (modeled acquisition %.1f s)", len(result.points), args.out, result.timing)
    if args.figure:
        from .plotting import bode_figure

        bode_figure(result, cfg.channels, calibrated=args.calibrated, path=args.figure)
    return 0


def cmd_verify(args) -> int:
    cfg = _load(args)
    result = run_sweep(cfg, workers=args.workers)
    report = build_report(cfg, result)
    csvio.write_report_csv(report, args.out)

    mode = "ideal ADC, per-point limits" if report.ideal_adc else "quantized ADC, median limits"
    print(f"verify: {len(report.records)} points, {mode}")
    print(f"{'ch':>3} {'decade':>7} {'n':>3} {'med|dZ|':>10} {'max|dZ|':>10} {'med dph':>9} {'max dph':>9}")
    for s in report.summary:
        print(f"{s['channel']:>3} {'1e%+d' % s['decade']:>7} {s['n']:>3} "
              f"{s['median_mag_rel_err']:>10.3e} {s['max_mag_rel_err']:>10.3e} "
              f"{s['median_phase_err_deg']:>9.3g} {s['max_phase_err_deg']:>9.3g}")
    for msg in report.failures[:20]:
        print(f"  FAIL {msg}")
    print("PASS" if report.passed else f"FAIL ({len(report.failures)} violations)")

    if not args.no_figure:
        from .plotting import bode_figure

        fig_path = args.figure or str(Path(args.out).with_suffix(".png"))
        bode_figure(result, cfg.channels, path=fig_path)
    return 0 if report.passed else EXIT_FAIL


def cmd_capacity(args) -> int:
    print(channel_capacity(args.throughput, args.pair_bytes))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="iqeis", description="Quarter-cycle I/Q impedance spectroscopy simulator")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("plan", help="show the acquisition plan for one frequency")
    sp.add_argument("freq", type=float)
    sp.add_argument("--f-s", type=float, default=200e3)
    sp.add_argument("--f-clk", type=float, default=50e6)
    sp.add_argument("--f-dds-clk", type=float, default=100e6)
    sp.add_argument("--m", type=int, default=32)
    sp.add_argument("--bits", type=int, default=10)
    sp.set_defaults(func=cmd_plan)

    for name, func, helptext in (
        ("sweep", cmd_sweep, "run a sweep and write the spectrum CSV"),
        ("verify", cmd_verify, "run a sweep and compare against the analytic model"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--config", required=True)
        sp.add_argument("--out", required=True)
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--figure", help="Bode plot output path (PNG/PDF/SVG)")
        sp.set_defaults(func=func)
    sub.choices["sweep"].add_argument("--calibrated", action="store_true", help="plot alpha-scaled magnitude")
    sub.choices["verify"].add_argument("--no-figure", action="store_true")

    sp = sub.add_parser("capacity", help="channels supported by a link throughput")
    sp.add_argument("--throughput", type=float, required=True, help="bytes per second")
    sp.add_argument("--pair-bytes", type=float, required=True)
    sp.set_defaults(func=cmd_capacity)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (ParseError, ValidationError, MissingGroundTruth, BandError) as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (IQEISError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
