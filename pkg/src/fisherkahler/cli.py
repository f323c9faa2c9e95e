"""Command-line driver.

Exit codes: 0 all checks pass, 1 a check failed, 2 bad configuration,
3 a trajectory left the open simplex.
"""

import argparse
import csv
import json
import sys
from contextlib import contextmanager

import numpy as np

from .connections import geodesic
from .errors import GeometryError, LeftSimplex
from .natgrad import natural_gradient_descent
from .simplex import TangentVector, make_distribution, random_point
from .verification import REGISTRY, ConfigurationError, run_pullback, run_verify

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_LEFT_SIMPLEX = 3


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="fisherkahler", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, n_default, samples_default=1000):
        p.add_argument("--n", type=_ints, default=n_default, help="dimension(s), comma-separated")
        p.add_argument("--samples", type=int, default=samples_default)
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--tol-scale", type=float, default=1.0, help="multiply every tolerance")

    v = sub.add_parser("verify", help="run every registered invariant check")
    common(v, [2, 3, 5, 8])
    v.add_argument("--check", action="append", choices=sorted(REGISTRY), help="restrict to a check")

    g = sub.add_parser("geodesic", help="integrate an alpha-geodesic and dump it as CSV")
    g.add_argument("--alpha", type=float, required=True)
    g.add_argument("--p0", type=_floats, required=True)
    g.add_argument("--v0", type=_floats, required=True)
    g.add_argument("--t-end", type=float, default=1.0)
    g.add_argument("--steps", type=int, default=256)
    g.add_argument("--out")

    pb = sub.add_parser("pullback", help="check the pullback identities on a random batch")
    common(pb, [3])
    pb.add_argument("--mode", choices=("analytic", "fd"), default="analytic")
    pb.add_argument("--example", action="store_true", help="use the worked n=2 configuration")

    ng = sub.add_parser("natgrad", help="natural-gradient descent demo")
    ng.add_argument("--n", type=int)
    ng.add_argument("--target", type=_floats, required=True)
    ng.add_argument("--iters", type=int, default=200)
    ng.add_argument("--step", type=float, default=0.25)
    ng.add_argument("--seed", type=int, default=42)
    ng.add_argument("--start", type=_floats, help="starting point (default: uniform)")
    ng.add_argument("--random-start", action="store_true", help="draw the start from --seed")
    ng.add_argument("--out")
    return parser


@contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit_report(report, out):
    for r in report.records:
        status = "PASS" if r.passed else "FAIL"
        print(
            f"{status} {r.name:40s} n={r.n:<3d} err={r.max_abs_error:.3e} tol={r.tolerance:.1e}",
            file=sys.stderr,
        )
    with _output(out) as fh:
        json.dump(report.to_json(), fh, indent=2)
        fh.write("\n")
    return EXIT_OK if report.overall_pass else EXIT_CHECK_FAILED


def cmd_verify(args):
    report = run_verify(args.n, args.samples, args.seed, args.tol_scale, names=args.check)
    return _emit_report(report, args.out)


def cmd_pullback(args):
    if len(args.n) != 1:
        raise ConfigurationError("pullback takes a single --n")
    report, _ = run_pullback(
        args.n[0], args.samples, args.seed, args.mode, args.tol_scale, example=args.example
    )
    return _emit_report(report, args.out)


def closed_form(alpha, p0, v0, t):
    """e-geodesic (alpha = 1) or m-geodesic (alpha = -1) at time t; None otherwise."""
    if alpha == 1.0:
        e = p0 * np.exp(t * v0)
        return e / e.sum()
    if alpha == -1.0:
        return p0 + t * p0 * v0
    return None


def cmd_geodesic(args):
    try:
        p0 = make_distribution(args.p0)
        v0 = TangentVector(p0, args.v0)
    except GeometryError as exc:
        raise ConfigurationError(str(exc))
    if args.steps < 16:
        raise ConfigurationError("--steps must be at least 16")
    try:
        curve = geodesic(args.alpha, p0, v0, args.t_end, args.steps)
    except LeftSimplex as exc:
        print(f"left the open simplex at t = {exc.t_exit:.17g}: {exc}", file=sys.stderr)
        return EXIT_LEFT_SIMPLEX
    with _output(args.out) as fh:
        curve.write_csv(fh)
    ref = closed_form(args.alpha, p0.weights, v0.components, args.t_end)
    if ref is not None:
        dev = float(np.max(np.abs(curve.points[-1] - ref)))
        print(f"final-point deviation from closed form: {dev:.3e}", file=sys.stderr)
    return EXIT_OK


def cmd_natgrad(args):
    try:
        target = make_distribution(args.target)
    except GeometryError as exc:
        raise ConfigurationError(str(exc))
    n = target.n
    if args.n is not None and args.n != n:
        raise ConfigurationError(f"--n {args.n} does not match target length {n}")
    if args.step <= 0 or args.iters < 0:
        raise ConfigurationError("--step must be positive and --iters non-negative")
    if args.start is not None:
        try:
            start = make_distribution(args.start)
        except GeometryError as exc:
            raise ConfigurationError(str(exc))
    elif args.random_start:
        start = random_point(n, args.seed)
    else:
        start = make_distribution(np.full(n, 1.0 / n))
    try:
        trace = natural_gradient_descent(start, target, args.iters, args.step)
    except LeftSimplex as exc:
        print(f"left the open simplex: {exc}", file=sys.stderr)
        return EXIT_LEFT_SIMPLEX
    with _output(args.out) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["iter", "f"] + [f"p_{i + 1}" for i in range(n)])
        for s in trace:
            writer.writerow([s.iteration, format(s.loss, ".17g")] + [format(x, ".17g") for x in s.weights])
    print(f"final loss {trace[-1].loss:.3e} after {trace[-1].iteration} iterations", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "geodesic": cmd_geodesic,
    "pullback": cmd_pullback,
    "natgrad": cmd_natgrad,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
