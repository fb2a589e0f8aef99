"""Command-line interface over JSON mixture model files.

Subcommands: ``distance``, ``interpolate``, ``barycenter``, ``sweep``,
``validate``. Numeric output uses 12 significant digits. Exit codes: 0 on
success, 1 on solver failures, 2 on unparseable model files, 3 on domain
or usage errors.

When a report is written to a file, a matplotlib figure is rendered next
to it (same stem, ``.png``) unless suppressed with ``--no-plot``; writing
to standard output produces a figure only when ``--plot PATH`` is given.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .errors import DimError, DomainError, GmmOtError, ParseError
from .mixture import load_model, save_model, write_model
from .mixture_ot import mixture_barycenter_result, mixture_distance, mixture_geodesic
from .oracle import bimodal_sweep, sweep_csv

EXIT_OK = 0
EXIT_SOLVER = 1
EXIT_PARSE = 2
EXIT_DOMAIN = 3


def _fmt(x: float) -> str:
    return f"{x:.12g}"


class _Parser(argparse.ArgumentParser):
    """argparse with the usage exit code pinned to the domain/usage code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_DOMAIN)


def _matrix(values: np.ndarray) -> list:
    return [[float(v) for v in row] for row in np.atleast_2d(values)]


def cmd_validate(args) -> int:
    for path in args.models:
        mix = load_model(path)
        print(f"{path}: ok dim={mix.dim} components={mix.size}")
    return EXIT_OK


def cmd_distance(args) -> int:
    mu0 = load_model(args.model_a)
    mu1 = load_model(args.model_b)
    result = mixture_distance(mu0, mu1)
    if args.coupling:
        print(
            json.dumps(
                {
                    "distance": float(result.distance),
                    "plan": _matrix(result.coupling.plan),
                    "cost_matrix": _matrix(result.cost_matrix),
                },
                indent=2,
            )
        )
    else:
        print(_fmt(result.distance))
    return EXIT_OK


def cmd_interpolate(args) -> int:
    mu0 = load_model(args.model_a)
    mu1 = load_model(args.model_b)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    points = []
    for t in args.t:
        mix = mixture_geodesic(mu0, mu1, t)
        target = out_dir / f"{args.prefix}_t{t:g}.json"
        save_model(mix, target)
        print(target)
        points.append((t, mix))
    if args.plot:
        from .plotting import save_interpolation_figure

        save_interpolation_figure(points, args.plot)
        print(args.plot)
    return EXIT_OK


def cmd_barycenter(args) -> int:
    mixtures = [load_model(path) for path in args.models]
    lam = np.asarray(args.lam, dtype=float)
    if lam.size != len(mixtures):
        raise DomainError(
            f"{lam.size} weights given for {len(mixtures)} models"
        )
    if abs(lam.sum() - 1.0) > 1e-9:
        raise DomainError(f"weights sum to {lam.sum()!r}, expected 1")
    support = None
    if args.support:
        support = load_model(args.support).components
    result = mixture_barycenter_result(mixtures, lam, support=support)
    if args.out == "-":
        sys.stdout.buffer.write(write_model(result.mixture))
        print(f"objective {_fmt(result.objective)}", file=sys.stderr)
    else:
        save_model(result.mixture, args.out)
        print(f"objective {_fmt(result.objective)}")
        print(args.out)
    if args.plot:
        from .plotting import save_mixture_figure

        labels = [f"input {k + 1}" for k in range(len(mixtures))]
        save_mixture_figure(
            mixtures + [result.mixture], labels + ["barycenter"], args.plot
        )
        print(args.plot)
    return EXIT_OK


def cmd_sweep(args) -> int:
    rows = bimodal_sweep(args.deltas, resolution=args.resolution)
    text = sweep_csv(rows)
    if args.out == "-":
        sys.stdout.write(text)
        figure_path = args.plot
    else:
        Path(args.out).write_text(text, encoding="utf-8")
        print(args.out)
        figure_path = args.plot or (
            None if args.no_plot else str(Path(args.out).with_suffix(".png"))
        )
    if figure_path and not args.no_plot:
        from .plotting import save_sweep_figure

        save_sweep_figure(rows, figure_path)
        print(figure_path)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(
        prog="gmmot",
        description="Transport distances, geodesics and barycenters "
        "for Gaussian mixture models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check model files")
    p.add_argument("models", nargs="+", help="model files to check")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("distance", help="distance between two models")
    p.add_argument("model_a")
    p.add_argument("model_b")
    p.add_argument(
        "--coupling",
        action="store_true",
        help="emit the optimal plan and cost matrix as JSON",
    )
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("interpolate", help="geodesic interpolation")
    p.add_argument("model_a")
    p.add_argument("model_b")
    p.add_argument("--t", type=float, nargs="+", required=True, metavar="T",
                   help="interpolation times in [0, 1]")
    p.add_argument("--out-dir", default=".", help="directory for output models")
    p.add_argument("--prefix", default="interp", help="output filename prefix")
    p.add_argument("--plot", metavar="PNG", help="render the path densities")
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("barycenter", help="weighted barycenter of models")
    p.add_argument("models", nargs="+", help="input model files")
    p.add_argument("--lambda", dest="lam", type=float, nargs="+", required=True,
                   metavar="W", help="barycenter weights, summing to 1")
    p.add_argument("--support", help="model file fixing the support components")
    p.add_argument("--out", default="barycenter.json",
                   help="output model path, or - for stdout")
    p.add_argument("--plot", metavar="PNG", help="render inputs and result")
    p.set_defaults(func=cmd_barycenter)

    p = sub.add_parser("sweep", help="metric vs Wasserstein oracle sweep")
    p.add_argument("--deltas", type=float, nargs="+", metavar="D",
                   default=[0.25 * k for k in range(13)],
                   help="separation values (default 0..3 step 0.25)")
    p.add_argument("--resolution", type=int, default=100_000,
                   help="quantile levels for the oracle")
    p.add_argument("--out", default="-", help="CSV path, or - for stdout")
    p.add_argument("--plot", metavar="PNG", help="explicit figure path")
    p.add_argument("--no-plot", action="store_true", help="skip the figure")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"gmmot: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DomainError, DimError) as exc:
        print(f"gmmot: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except GmmOtError as exc:
        print(f"gmmot: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"gmmot: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
