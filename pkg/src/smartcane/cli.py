"""Command-line front-end.

Exit status: 0 on success, 1 on runtime errors (e.g. unreadable files),
2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from smartcane.alert_controller import (
    FIG2_RAW,
    PROFILES,
    ControllerConfig,
    describe_alert,
    outputs_for_class,
    classify_range,
    voice_for_class,
)
from smartcane.errors import DomainError, FormatError
from smartcane.scenario_sim import load_scenario, run_simulation, summarize, trace_to_csv
from smartcane.signal_chain import (
    TimerConfig,
    astable_period,
    default_calibration,
    duty_cycle,
    format_calibration,
    frequency_from_period,
)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

_SI = {"p": 1e-12, "n": 1e-9, "u": 1e-6, "µ": 1e-6, "m": 1e-3, "k": 1e3, "M": 1e6}


def parse_si(text: str) -> float:
    """Parse a number with an optional SI suffix: ``10k``, ``1u``, ``22p``."""
    text = text.strip()
    scale = 1.0
    if text and text[-1] in _SI:
        scale = _SI[text[-1]]
        text = text[:-1]
    try:
        return float(text) * scale
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _err(msg):
    print(f"smartcane: error: {msg}", file=sys.stderr)


def cmd_simulate(args) -> int:
    try:
        scenario = load_scenario(args.scenario)
    except OSError as exc:
        _err(f"cannot read {args.scenario}: {exc.strerror or exc}")
        return EXIT_RUNTIME
    except FormatError as exc:
        _err(f"{args.scenario}: {exc}")
        return EXIT_USAGE
    if args.profile is not None:
        scenario = replace(scenario, profile=args.profile)
    if args.literal:
        scenario = replace(scenario, literal=True)
    try:
        events = run_simulation(scenario)
    except DomainError as exc:
        _err(str(exc))
        return EXIT_RUNTIME
    csv_text = trace_to_csv(events)
    summary = str(summarize(events))
    if args.csv:
        try:
            with open(args.csv, "w", encoding="utf-8", newline="") as fh:
                fh.write(csv_text)
        except OSError as exc:
            _err(f"cannot write {args.csv}: {exc.strerror or exc}")
            return EXIT_RUNTIME
        print(summary)
    else:
        sys.stdout.write(csv_text)
        print(summary, file=sys.stderr)
    return EXIT_OK


def cmd_calibrate(args) -> int:
    sys.stdout.write(format_calibration(default_calibration()))
    return EXIT_OK


def cmd_timer(args) -> int:
    try:
        cfg = TimerConfig(args.r1, args.r2, args.r3, args.c1)
    except DomainError as exc:
        _err(str(exc))
        return EXIT_USAGE
    period = astable_period(cfg)
    print(f"period {period:.6g} s")
    print(f"frequency {frequency_from_period(period):.2f} Hz")
    print(f"duty {duty_cycle(cfg):.4f}")
    return EXIT_OK


def cmd_classify(args) -> int:
    cfg = ControllerConfig(profile=args.profile, literal_mode=args.literal)
    if not 0 <= args.count <= cfg.max_count:
        _err(f"count {args.count} outside [0, {cfg.max_count}]")
        return EXIT_USAGE
    c = classify_range(args.count, cfg)
    alert = replace(outputs_for_class(c, cfg), voice=voice_for_class(c))
    print(describe_alert(alert))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smartcane",
        description="Ultrasonic obstacle-alert cane simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a scenario file and emit a CSV trace")
    p.add_argument("scenario")
    p.add_argument("--profile", choices=PROFILES, default=None,
                   help="threshold profile (default: scenario setting, else table1_feet)")
    p.add_argument("--literal", action="store_true",
                   help="reproduce the original firmware conditionals exactly")
    p.add_argument("--csv", metavar="PATH", help="write the trace here instead of stdout")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("calibrate", help="print the sensor calibration table")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("timer", help="astable timer period, frequency and duty cycle")
    for name in ("r1", "r2", "r3"):
        p.add_argument(f"--{name}", type=parse_si, required=True, metavar="OHMS")
    p.add_argument("--c1", type=parse_si, required=True, metavar="FARADS")
    p.set_defaults(func=cmd_timer)

    p = sub.add_parser("classify", help="classify one ADC count")
    p.add_argument("count", type=int)
    # counts are raw firmware units, so the firmware thresholds are the natural default
    p.add_argument("--profile", choices=PROFILES, default=FIG2_RAW,
                   help="threshold profile (default: fig2_raw)")
    p.add_argument("--literal", action="store_true")
    p.set_defaults(func=cmd_classify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
