"""Command-line interface.

Each subcommand reads its inputs, calls one or two library functions and
writes the result; no numerics live here.  Exit codes: 0 success, 1 usage
error, 2 data error, 3 resource cap exceeded.  The simplex cap can be
overridden with the ``TOPOSTAT_MAX_SIMPLICES`` environment variable.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import replace

from . import io
from .complexes import Builder
from .diagrams import bottleneck_distance
from .errors import DataError, ReplicationError, ResourceCapError, TopostatError
from .metric import hausdorff_distance
from .persistence import persistence_diagram
from .plot import plot_svg
from .statistics import (
    SPACE_KINDS,
    SpaceSpec,
    boundary_density_lower_bound,
    confidence_radius,
    convergence_experiment,
    dirac_pair_demo,
    hausdorff_tail_bound,
    lecam_bound,
    manifold_lower_bound,
    minimax_rate,
    minimax_rate_density,
    minimax_rate_manifold,
    sample,
)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CAP = 0, 1, 2, 3

BOUND_KINDS = (
    "tail", "rate", "rate-density", "rate-manifold", "confidence",
    "lecam", "dirac", "density-tv", "manifold-tv",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {s}")
    return v


def _nonneg_float(s):
    v = float(s)
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="topostat", description="Persistence diagrams of sampled metric spaces and their convergence.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sample", help="draw a sample from a measured space")
    s.add_argument("--space", required=True, choices=SPACE_KINDS)
    s.add_argument("--n", required=True, type=_positive_int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--d", type=int, default=1, help="ball_boundary_density dimension")
    s.add_argument("--alpha", type=float, default=0.0, help="ball_boundary_density exponent")
    s.add_argument("--rho0", type=float, default=1.0, help="dirac_pair separation")
    s.add_argument("--D", type=int, default=3, help="highdim_circle ambient dimension")
    s.add_argument("--out", required=True)

    for kind in ("rips", "cech", "alpha2d"):
        c = sub.add_parser(kind, help=f"build the {kind} filtration")
        if kind == "rips":
            src = c.add_mutually_exclusive_group(required=True)
            src.add_argument("--points")
            src.add_argument("--distances")
        else:
            c.add_argument("--points", required=True)
            c.add_argument("--distances", help=argparse.SUPPRESS)
        if kind != "alpha2d":
            c.add_argument("--threshold", type=_nonneg_float, default=math.inf)
            c.add_argument("--maxdim", type=int, default=1)
        c.add_argument("--out", required=True)

    c = sub.add_parser("persist", help="persistence diagram of a filtration file")
    c.add_argument("filtration")
    c.add_argument("--plain", action="store_true", help="plain column reduction (no clearing)")
    c.add_argument("--out")

    c = sub.add_parser("bottleneck", help="bottleneck distance between two diagram files")
    c.add_argument("diagram1")
    c.add_argument("diagram2")
    c.add_argument("--dim", type=int, required=True)

    c = sub.add_parser("hausdorff", help="Hausdorff distance between two point clouds")
    c.add_argument("cloud1")
    c.add_argument("cloud2")

    c = sub.add_parser("experiment", help="run a convergence experiment from a config file")
    c.add_argument("config")
    c.add_argument("--seed", type=int, help="override the config seed")
    c.add_argument("--threads", type=_positive_int, default=1)
    c.add_argument("--out")

    c = sub.add_parser("bound", help="evaluate a tail bound, rate or lower bound")
    c.add_argument("kind", choices=BOUND_KINDS)
    c.add_argument("--a", type=float, default=1.0)
    c.add_argument("--b", type=float, default=1.0)
    c.add_argument("--n", type=float, default=100)
    c.add_argument("--eps", type=float, default=0.1)
    c.add_argument("--level", type=float, default=0.05)
    c.add_argument("--d", type=int, default=1)
    c.add_argument("--alpha", type=float, default=1.0)
    c.add_argument("--rho", type=float, default=1.0)
    c.add_argument("--tv", type=float, default=0.0)
    c.add_argument("--rho0", type=float, default=1.0)
    c.add_argument("--C-a", dest="C_a", type=float, default=1.0)
    c.add_argument("--C", type=float, default=1.0)
    c.add_argument("--gamma", type=float, default=0.01)

    c = sub.add_parser("plot", help="log-log SVG of a results file")
    c.add_argument("results")
    c.add_argument("--out", required=True)
    return p


_INPUTS = {
    "rips": ("points", "distances"),
    "cech": ("points",),
    "alpha2d": ("points",),
    "persist": ("filtration",),
    "bottleneck": ("diagram1", "diagram2"),
    "hausdorff": ("cloud1", "cloud2"),
    "experiment": ("config",),
    "plot": ("results",),
}


def parse_args(argv):
    """Parse and validate ``argv``; raises :class:`UsageError`."""
    args = build_parser().parse_args(argv)
    if args.command == "cech" and getattr(args, "distances", None):
        raise UsageError("topostat cech: --distances is not supported; Cech values need coordinates")
    for name in _INPUTS.get(args.command, ()):
        path = getattr(args, name, None)
        if path is not None and not os.path.isfile(path):
            raise UsageError(f"topostat {args.command}: {name}: no such file: {path}")
    out = getattr(args, "out", None)
    if out is not None:
        parent = os.path.dirname(os.path.abspath(out))
        if not os.path.isdir(parent):
            raise UsageError(f"topostat {args.command}: --out: directory does not exist: {parent}")
    return args


def _emit(text: str, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _space_input(args):
    if getattr(args, "distances", None):
        return io.read_distance_matrix(args.distances)
    return io.read_point_cloud(args.points)


def run(args) -> int:
    cmd = args.command
    if cmd == "sample":
        space = SpaceSpec(args.space, d=args.d, alpha=args.alpha, rho0=args.rho0, D=args.D)
        X = sample(space, args.n, args.seed)
        if space.kind == "highdim_circle":
            io.write_distance_matrix(X, args.out)
        else:
            io.write_point_cloud(X, args.out)
    elif cmd in ("rips", "cech", "alpha2d"):
        if cmd == "alpha2d":
            builder = Builder("alpha2d")
        else:
            builder = Builder(cmd, threshold=args.threshold, maxdim=args.maxdim)
        io.write_filtration(builder(_space_input(args)), args.out)
    elif cmd == "persist":
        f = io.read_filtration(args.filtration)
        _emit(io.format_diagram(persistence_diagram(f, clearing=not args.plain)), args.out)
    elif cmd == "bottleneck":
        d1, d2 = io.read_diagram(args.diagram1), io.read_diagram(args.diagram2)
        print(io.fmt(bottleneck_distance(d1.restrict(args.dim), d2.restrict(args.dim), args.dim)))
    elif cmd == "hausdorff":
        print(io.fmt(hausdorff_distance(io.read_point_cloud(args.cloud1), io.read_point_cloud(args.cloud2))))
    elif cmd == "experiment":
        cfg = io.read_config(args.config)
        if args.seed is not None:
            cfg = replace(cfg, seed=args.seed)
        _emit(io.format_results(convergence_experiment(cfg, threads=args.threads)), args.out)
    elif cmd == "bound":
        print(_bound(args))
    elif cmd == "plot":
        plot_svg(io.read_results(args.results), args.out)
    return EXIT_OK


def _bound(args) -> str:
    k = args.kind
    n = args.n
    if k == "tail":
        return io.fmt(hausdorff_tail_bound(args.a, args.b, n, args.eps))
    if k == "rate":
        return io.fmt(minimax_rate(args.b, n))
    if k == "rate-density":
        return io.fmt(minimax_rate_density(args.d, args.alpha, n))
    if k == "rate-manifold":
        return io.fmt(minimax_rate_manifold(args.d, n))
    if k == "confidence":
        return io.fmt(confidence_radius(args.a, args.b, n, args.level))
    if k == "lecam":
        return io.fmt(lecam_bound(args.rho, args.tv, int(n)))
    if k == "dirac":
        values = dirac_pair_demo(int(n), args.rho0)
    elif k == "density-tv":
        values = boundary_density_lower_bound(args.d, args.alpha, args.C_a, args.eps, int(n))
    else:
        values = manifold_lower_bound(args.C, args.gamma, args.d, int(n))
    return "tv={}, db={}, bound={}".format(*map(io.fmt, values))


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, ReplicationError) and exc.__cause__ is not None:
        exc = exc.__cause__
    if isinstance(exc, ResourceCapError):
        return EXIT_CAP
    return EXIT_DATA


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        args = parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        return run(args)
    except (TopostatError, DataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
