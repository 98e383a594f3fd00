"""Command line entry point.

    factorcirc simulate config.json [-o traj.csv] [--plot out.svg --style S]
    factorcirc spectrum config.json
    factorcirc verify config.json
    factorcirc plot traj.csv --style S -o out.svg

Exit codes: 0 success, 1 config error, 2 numeric error or failed check, 3 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ConfigError, FactorCircError
from .output import read_trajectory, render_plot, trajectory_csv, write_trajectory
from .scenario import PLOT_STYLES, format_table, parse_config, run_scenario, spectrum_report, verify

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3


def _load_config(path):
    return parse_config(Path(path).read_text(encoding="utf-8"))


def cmd_simulate(args) -> int:
    config = _load_config(args.config)
    traj = run_scenario(config)
    out = args.output or config.outputs.trajectory
    if out is None or out == "-":
        sys.stdout.write(trajectory_csv(traj))
    else:
        write_trajectory(traj, out)
    plot = args.plot or config.outputs.plot
    if plot:
        render_plot(traj, args.style or config.outputs.plot_style, plot)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    sys.stdout.write(spectrum_report(_load_config(args.config)))
    return EXIT_OK


def cmd_verify(args) -> int:
    rows = verify(_load_config(args.config))
    sys.stdout.write(format_table(rows))
    return EXIT_NUMERIC if any(status == "FAIL" for _, status, _ in rows) else EXIT_OK


def cmd_plot(args) -> int:
    try:
        traj = read_trajectory(args.trajectory)
    except ValueError as exc:
        # a malformed CSV is an input-file problem, not a numeric one
        raise OSError(str(exc)) from None
    render_plot(traj, args.style, args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="factorcirc",
        description="Simulate swarms driven by lambda-factor circulant interaction matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a scenario and write its trajectory as CSV")
    p.add_argument("config", help="JSON scenario file")
    p.add_argument("-o", "--output", help="CSV path ('-' for stdout); overrides outputs.trajectory")
    p.add_argument("--plot", help="also write an SVG plot here; overrides outputs.plot")
    p.add_argument("--style", choices=PLOT_STYLES, help="plot style (default from config)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("spectrum", help="print eigenvalues, dominant modes and limit class")
    p.add_argument("config")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="check modal vs direct evolution and invariance")
    p.add_argument("config")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plot", help="render a trajectory CSV as SVG")
    p.add_argument("trajectory")
    p.add_argument("--style", choices=PLOT_STYLES, default="full_evolution")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (FactorCircError, ValueError, ArithmeticError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
