"""Command-line front end.

Exit codes: 0 success, 2 input or validation error, 3 failed reproduction
check (``validate``), 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Optional, Sequence

from . import airtime, phy
from .airtime import PayloadTimeVariant
from .errors import ModelError
from .power import AckWindow, Mode, TransmissionPlan, check_duty_cycle, evaluate
from .profile import DEFAULT_PROFILE, load_profile
from .sweep import SweepSpec, report_row, resolve_payload, run_sweep, write_sweep_csv
from .trace import export_trace, render_trace
from .validation import run_validation

EXIT_OK, EXIT_INPUT, EXIT_CHECK, EXIT_IO = 0, 2, 3, 4

_PERIOD_UNITS = {"s": 1.0, "min": 60.0, "h": 3600.0}


def _payload(text: str):
    if text == "max":
        return text
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"payload must be an integer or 'max', got {text!r}")
    return value


def _add_model_args(p):
    p.add_argument("--profile", help="JSON device profile overlaying the built-in characterization")
    p.add_argument(
        "--variant",
        choices=[v.value for v in PayloadTimeVariant],
        default=airtime.DEFAULT_VARIANT.value,
        help="LR-FHSS payload-time formula",
    )
    p.add_argument("--nsymb", type=int, help="compute empty Rx1 as NSYMB symbols instead of the measured value")
    p.add_argument("--allow-duty-violation", action="store_true", help="evaluate periods below the 1%% duty-cycle floor")
    p.add_argument("--format", choices=("human", "csv", "json"), default="human")


def _add_plan_args(p):
    p.add_argument("--dr", type=int, required=True)
    p.add_argument("--payload", type=_payload, default="max", help="FRM payload bytes or 'max'")
    p.add_argument("--fopts", type=int, default=0)
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.UNCONFIRMED.value)
    p.add_argument("--period", type=float, required=True, help="uplink period")
    p.add_argument("--unit", choices=tuple(_PERIOD_UNITS), default="s", help="unit of --period")
    p.add_argument("--battery", type=float, help="battery capacity, mAh")
    p.add_argument("--voltage", type=float, help="supply voltage, V")
    p.add_argument("--p1", type=float, default=0.5, help="probability the ACK arrives in Rx1")
    p.add_argument("--sleep-ua", type=float, help="sleep and wait-state current, uA")
    _add_model_args(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lrfhss-energy", description="Energy model of a Class A LoRaWAN LR-FHSS end-device."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("airtime", help="uplink time breakdown")
    p.add_argument("--dr", type=int, required=True)
    p.add_argument("--payload", type=_payload, default="max")
    p.add_argument("--fopts", type=int, default=0)
    p.add_argument("--variant", choices=[v.value for v in PayloadTimeVariant], default=airtime.DEFAULT_VARIANT.value)
    p.add_argument("--format", choices=("human", "csv", "json"), default="human")

    p = sub.add_parser("report", help="average current, lifetime, energy cost, duty-cycle floor")
    _add_plan_args(p)

    p = sub.add_parser("validate", help="reproduce the published tables and headline results")
    _add_model_args(p)

    p = sub.add_parser("sweep", help="CSV grid over uplink periods")
    p.add_argument("--dr", type=int, nargs="+", required=True)
    p.add_argument("--payload", type=_payload, nargs="+", default=["max"])
    p.add_argument("--mode", choices=[m.value for m in Mode], nargs="+", default=[Mode.UNCONFIRMED.value])
    p.add_argument("--start", type=float, required=True, help="first period")
    p.add_argument("--stop", type=float, required=True, help="last period")
    p.add_argument("--unit", choices=tuple(_PERIOD_UNITS), default="s")
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--spacing", choices=("linear", "log"), default="log")
    p.add_argument("--sleep-ua", type=float, nargs="+")
    p.add_argument("--output", "-o", default="-")
    _add_model_args(p)

    p = sub.add_parser("trace", help="per-cycle current trace as CSV")
    _add_plan_args(p)
    p.add_argument("--ack-window", choices=[w.value for w in AckWindow])
    p.add_argument("--output", "-o", default="-")
    return parser


def _profile(args):
    return load_profile(args.profile) if args.profile else DEFAULT_PROFILE


def _plan_from_args(args) -> TransmissionPlan:
    return TransmissionPlan(
        args.dr,
        resolve_payload(args.dr, args.payload),
        args.period * _PERIOD_UNITS[args.unit],
        mode=Mode(args.mode),
        fopts_bytes=args.fopts,
        battery_mah=args.battery,
        supply_v=args.voltage,
        p1=args.p1,
        sleep_current_ma=None if args.sleep_ua is None else args.sleep_ua / 1e3,
        variant=PayloadTimeVariant(args.variant),
        n_symb=args.nsymb,
        allow_duty_violation=args.allow_duty_violation,
        profile=_profile(args),
    )


def _emit(record: dict, fmt: str, out, human_lines: Sequence[str]):
    if fmt == "json":
        json.dump(record, out, sort_keys=True)
        out.write("\n")
    elif fmt == "csv":
        writer = csv.DictWriter(out, fieldnames=list(record), lineterminator="\n")
        writer.writeheader()
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in record.items()})
    else:
        out.write("\n".join(human_lines) + "\n")


def cmd_airtime(args, out) -> int:
    nbytes = resolve_payload(args.dr, args.payload)
    spec = phy.dr_spec(args.dr)
    if not spec.is_lrfhss and args.dr not in airtime.LORA_TX_ANCHORS_MS:
        raise ModelError(f"DR{args.dr} is not modeled; use DR0, DR5 or DR8-DR11")
    tx = airtime.tx_breakdown(args.dr, nbytes, args.fopts, PayloadTimeVariant(args.variant))
    record = {
        "dr": args.dr,
        "payload_bytes": nbytes,
        "l_phy_bytes": tx.l_phy,
        "t_header_ms": tx.t_header_ms,
        "t_payload_ms": tx.t_payload_ms,
        "n_hops": tx.n_hops,
        "t_freq_hops_ms": tx.t_freq_hops_ms,
        "t_tx_ms": tx.t_tx_ms,
        "duty_min_s": airtime.min_duty_cycle_period(tx.t_tx_ms),
    }
    lines = [f"DR{args.dr} ({spec.modulation.value}), FRM payload {nbytes} B, PHYPayload {tx.l_phy} B"]
    if spec.is_lrfhss:
        lines += [
            f"  T_header     {tx.t_header_ms:10.3f} ms  ({tx.n_replicas} replicas)",
            f"  T_payload    {tx.t_payload_ms:10.3f} ms  ({args.variant})",
            f"  T_freqHops   {tx.t_freq_hops_ms:10.3f} ms  ({tx.n_hops} hops)",
        ]
    lines += [
        f"  T_Tx         {tx.t_tx_ms:10.1f} ms",
        f"  1% duty-cycle minimum period {record['duty_min_s']:.4g} s",
    ]
    _emit(record, args.format, out, lines)
    return EXIT_OK


def report_record(report) -> dict:
    """Sweep columns first so every sweep row can be compared field by field."""
    row = report_row(report)
    record = {k: (float(v) if k not in ("dr", "mode", "payload_bytes") else v) for k, v in row.items()}
    record.update(
        lifetime_y=report.lifetime_y,
        t_tx_ms=report.t_tx_ms,
        duty_min_s=report.duty_min_s,
    )
    return record


def cmd_report(args, out) -> int:
    plan = _plan_from_args(args)
    report = evaluate(plan)
    label = "I_avg_ACKTx" if plan.mode is Mode.CONFIRMED else "I_avg_unTx"
    lines = [
        f"DR{plan.dr_index} {plan.mode.value}, FRM payload {plan.frm_payload_bytes} B, "
        f"period {plan.period_s:g} s, battery {plan.battery:g} mAh",
        f"  {label:<14}{report.avg_current_ma * 1e3:12.4f} uA",
        f"  lifetime      {report.lifetime_h:12.1f} h  ({report.lifetime_y:.2f} y)",
        f"  energy cost   {report.energy_cost_mj_per_bit:12.6g} mJ/bit",
        f"  duty-cycle minimum period {report.duty_min_s:.4g} s (T_Tx {report.t_tx_ms:.1f} ms)",
    ]
    _emit(report_record(report), args.format, out, lines)
    return EXIT_OK


def cmd_validate(args, out) -> int:
    checks = run_validation(_profile(args), PayloadTimeVariant(args.variant), args.nsymb)
    failed = [c for c in checks if not c.passed]
    if args.format == "json":
        json.dump(
            [
                {"group": c.group, "name": c.name, "expected": c.expected, "actual": c.actual,
                 "tolerance": c.describe_tolerance(), "passed": c.passed}
                for c in checks
            ],
            out,
            sort_keys=True,
        )
        out.write("\n")
    else:
        for c in checks:
            status = "PASS" if c.passed else "FAIL"
            out.write(f"{status}  {c.group:<9}{c.name:<44}expected {c.expected:<10g} "
                      f"actual {c.actual:<12.6g} tol {c.describe_tolerance()}\n")
        out.write(f"{len(checks) - len(failed)}/{len(checks)} checks passed\n")
    return EXIT_CHECK if failed else EXIT_OK


def cmd_sweep(args, out) -> int:
    scale = _PERIOD_UNITS[args.unit]
    spec = SweepSpec(
        drs=args.dr,
        period_start_s=args.start * scale,
        period_stop_s=args.stop * scale,
        points=args.points,
        spacing=args.spacing,
        payloads=args.payload,
        modes=[Mode(m) for m in args.mode],
        sleep_ua=args.sleep_ua or (None,),
        variant=PayloadTimeVariant(args.variant),
        n_symb=args.nsymb,
        allow_duty_violation=args.allow_duty_violation,
        profile=_profile(args),
    )
    reports = run_sweep(spec)
    n = write_sweep_csv(reports, out if args.output == "-" else args.output)
    if args.output != "-":
        sys.stderr.write(f"wrote {n} rows to {args.output}\n")
    return EXIT_OK


def cmd_trace(args, out) -> int:
    plan = _plan_from_args(args)
    window = args.ack_window
    if window is None:
        if plan.mode is Mode.CONFIRMED:
            raise ModelError("confirmed traces need --ack-window rx1 or rx2")
        window = AckWindow.NONE.value
    check_duty_cycle(plan)
    trace = render_trace(plan, AckWindow(window))
    n = export_trace(trace, out if args.output == "-" else args.output)
    if args.output != "-":
        sys.stderr.write(f"wrote {n} rows to {args.output}\n")
    return EXIT_OK


COMMANDS = {
    "airtime": cmd_airtime,
    "report": cmd_report,
    "validate": cmd_validate,
    "sweep": cmd_sweep,
    "trace": cmd_trace,
}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except ModelError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_INPUT
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
