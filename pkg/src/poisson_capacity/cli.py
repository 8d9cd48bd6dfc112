"""Command line entry point: ``poisson-capacity solve`` and ``poisson-capacity sweep``.

Exit status: 0 converged, 1 invalid arguments, 2 a point did not converge
(its record is still written).
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

from .channel import ChannelParams
from .gradient_ascent import LineSearchConfig
from .solver import SolverConfig, solve
from .sweep import SweepRecord, SweepSpec, export_records, parse_grid, run_sweep, write_manifest

EXIT_OK, EXIT_USAGE, EXIT_NOT_CONVERGED = 0, 1, 2

PLOT_SCRIPT = '''"""Plot support points and capacity from {data}."""
import sys
import matplotlib.pyplot as plt
from poisson_capacity.sweep import read_records

records = read_records(sys.argv[1] if len(sys.argv) > 1 else "{data}")
x = [r.{axis} for r in records]
fig, (ax1, ax2, ax3) = plt.subplots(1, 3, figsize=(13, 4))
for xv, r in zip(x, records):
    ax1.scatter([xv] * r.n_points, r.points, s=[60 * p + 2 for p in r.probs], c="k")
ax1.set_xlabel("{label}")
ax1.set_ylabel("support points")
ax2.plot(x, [r.n_points for r in records], "o-", label="support size")
ax2.plot(x, [r.eq11_bound for r in records], "s--", label="exp(I) lower bound")
ax2.set_xlabel("{label}")
ax2.legend()
ax3.plot(x, [r.capacity_nats for r in records], "o-")
ax3.set_xlabel("{label}")
ax3.set_ylabel("capacity [nats]")
fig.tight_layout()
plt.show()
'''


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _nonneg(text):
    value = float(text)
    if not (math.isfinite(value) and value >= 0):
        raise argparse.ArgumentTypeError(f"expected a finite nonnegative number, got {text}")
    return value


def _positive(text):
    value = float(text)
    if not (math.isfinite(value) and value > 0):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _count(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _add_solver_flags(p):
    p.add_argument("--dark-current", type=_nonneg, default=0.0, help="dark current lambda (default 0)")
    p.add_argument("--epsilon", type=_positive, default=1e-6, help="epsilon-KKT tolerance (default 1e-6)")
    p.add_argument("--n-ba", type=_count, default=100, help="Blahut-Arimoto iterations per pass")
    p.add_argument("--n-ga", type=_count, default=20, help="gradient ascent iterations per pass")
    p.add_argument("--min-spacing", type=_positive, default=1e-2, help="clustering distance")
    p.add_argument("--max-outer", type=_count, default=200, help="failsafe on outer iterations")
    p.add_argument("--no-polish", action="store_true", help="plain Blahut-Arimoto without the fixed-support solve")
    p.add_argument("--output", type=Path, help="data file to write")
    p.add_argument("--format", choices=("csv", "json"), help="output format (default from suffix, else csv)")
    p.add_argument("--bits", action="store_true", help="print capacities in bits")
    p.add_argument("-v", "--verbose", action="count", default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="poisson-capacity", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="capacity and optimal input pmf at one (A, lambda)")
    s.add_argument("--amplitude", type=_nonneg, required=True, help="amplitude constraint A")
    _add_solver_flags(s)

    w = sub.add_parser("sweep", help="solve over a grid of A or lambda")
    w.add_argument("--sweep", choices=("amplitude", "dark-current"), required=True)
    w.add_argument("--fixed", type=_nonneg, required=True, help="lambda for amplitude sweeps, A for dark-current sweeps")
    w.add_argument("--grid", required=True, help="start:stop:count[,lin|log]")
    w.add_argument("--checkpoints", type=int, default=8, help="cold-start re-solves (default 8)")
    w.add_argument("--plot-script", action="store_true", help="also write a matplotlib script next to the data")
    _add_solver_flags(w)
    # dark current comes from --fixed in sweeps
    w.set_defaults(dark_current=None)
    return parser


def _config(args) -> SolverConfig:
    return SolverConfig(epsilon=args.epsilon, n_ba=args.n_ba, n_ga=args.n_ga, min_spacing=args.min_spacing,
                        max_outer_iterations=args.max_outer, polish=not args.no_polish,
                        line_search=LineSearchConfig())


def _format(args) -> str:
    if args.format:
        return args.format
    if args.output is not None and args.output.suffix == ".json":
        return "json"
    return "csv"


def _summary(r: SweepRecord, bits: bool) -> str:
    cap = r.capacity_bits if bits else r.capacity_nats
    unit = "bits" if bits else "nats"
    support = " ".join(f"{x:.6g}" for x in r.points)
    status = "converged" if r.converged else "NOT converged"
    return (f"A={r.amplitude:g} lambda={r.dark_current:g}: C={cap:.9f} {unit}, {r.n_points} points [{support}], "
            f"duality gap {r.duality_gap:.3g}, {status}")


def run_solve_command(args) -> int:
    params = ChannelParams(args.amplitude, args.dark_current)
    record = SweepRecord.from_result(solve(params, _config(args)))
    print(_summary(record, args.bits))
    if args.output is not None:
        export_records([record], _format(args), args.output)
    return EXIT_OK if record.converged else EXIT_NOT_CONVERGED


def run_sweep_command(args) -> int:
    if args.dark_current is not None:
        raise ValueError("--dark-current is not used by sweep; pass lambda through --fixed or --grid")
    fmt = _format(args)
    spec = SweepSpec(mode=args.sweep, fixed_value=args.fixed, grid=tuple(parse_grid(args.grid)),
                     solver_config=_config(args), output_path=args.output, format=fmt)
    records, manifest = run_sweep(spec, checkpoints=args.checkpoints)
    for r in records:
        print(_summary(r, args.bits))
    if args.output is not None:
        export_records(records, fmt, args.output)
        write_manifest(manifest, args.output.with_name(args.output.name + ".manifest.json"))
        if args.plot_script:
            axis = "amplitude" if args.sweep == "amplitude" else "dark_current"
            label = "A" if args.sweep == "amplitude" else "lambda"
            script = args.output.with_name(args.output.stem + "_plot.py")
            script.write_text(PLOT_SCRIPT.format(data=args.output.name, axis=axis, label=label))
    return EXIT_OK if all(r.converged for r in records) else EXIT_NOT_CONVERGED


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "solve":
            return run_solve_command(args)
        return run_sweep_command(args)
    except ValueError as exc:
        print(f"poisson-capacity: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"poisson-capacity: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
