"""Command line interface.

Usage:
  gwishart constant --graph "n:4;edges:1-2,2-3,3-4,4-1" --delta 3 --method mc --samples 10000 --seed 1
  gwishart constant --graph path.txt --delta 3 --scale d.csv --method chordal
  gwishart constant --method fourier --gstar "n:4;edges:1-2,2-3,3-4,4-1,1-3" --drop-edge 1-3 --delta 3
  gwishart complete --graph "n:4;edges:1-2,2-3,3-4,4-1" --scale d.csv
  gwishart ratio-figure --delta-max 10 --out figure1.csv
  gwishart iris-table --out table1.csv
  gwishart mc-violin --seeds 200 --samples 1000 --out figure2.csv
  gwishart selfcheck

Graphs are given either as a file in the "n m" + edge-lines format or
inline as "n:4;edges:1-2,2-3,3-4,4-1".  Scales are matrix CSV files or the
word "identity".  ratio-figure and mc-violin also render a PNG next to the
CSV when --out is given.  Exit codes: 0 success, 1 input error, 2
tolerance or acceptance failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .completion import CompletionError, pd_complete
from .constants import chordal_constant, roverato_estimate
from .experiments import (IrisConfig, ScatterConventionError, figure1_table,
                          iris_table, violin_data, write_figure1_csv,
                          write_iris_csv, write_violin_csv)
from .fourier import QuadratureError, fourier_constant
from .graphs import Graph, NotChordalError, is_chordal, normalize_edge, parse_graph
from .montecarlo import DegenerateSampleError, mc_constant
from .symmat import NotPositiveDefiniteError, load_matrix_csv

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_TOLERANCE = 2


class CliParser(argparse.ArgumentParser):
    """argparse reserves exit code 2 for usage errors; remap those to 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def load_graph_arg(text: str) -> Graph:
    if text.lstrip().startswith("n:"):
        return parse_graph(text)
    return parse_graph(Path(text).read_text())


def load_scale_arg(text: str | None, n: int) -> np.ndarray:
    if text is None or text == "identity":
        return np.eye(n)
    return load_matrix_csv(text)


def parse_edge_arg(text: str) -> tuple[int, int]:
    a, sep, b = text.partition("-")
    if not sep:
        raise ValueError(f"edge {text!r} must look like 'mu-nu'")
    return normalize_edge(int(a), int(b))


def _identity_constant(g: Graph, delta: float):
    """C_G(delta, I) by the best exact route available for g."""
    ok, _ = is_chordal(g)
    if ok:
        return chordal_constant(g, delta, np.eye(g.n))
    for chord in g.non_edges():
        completed = g.add_edge(*chord)
        if is_chordal(completed)[0]:
            return fourier_constant(completed, chord, delta, np.eye(g.n))
    raise ValueError("no exact route: graph is neither chordal nor one edge short")


def _open_out(path: str | None):
    if path is None:
        return sys.stdout, False
    return open(path, "w", newline=""), True


def cmd_constant(args) -> int:
    if args.method == "fourier":
        if args.gstar is None or args.drop_edge is None:
            if args.graph is None:
                raise ValueError("fourier needs --gstar with --drop-edge, or --graph")
            g = load_graph_arg(args.graph)
            scale = load_scale_arg(args.scale, g.n)
            value = _fourier_via_chord(g, args.delta, scale)
        else:
            gstar = load_graph_arg(args.gstar)
            edge = parse_edge_arg(args.drop_edge)
            scale = load_scale_arg(args.scale, gstar.n)
            if args.graph is not None:
                g = load_graph_arg(args.graph)
                if g != gstar.remove_edge(*edge):
                    raise ValueError("--graph does not equal --gstar minus --drop-edge")
            value = fourier_constant(gstar, edge, args.delta, scale)
        print(_fmt(value.log_magnitude, args.full_precision))
        return EXIT_OK

    if args.graph is None:
        raise ValueError("--graph is required")
    g = load_graph_arg(args.graph)
    scale = load_scale_arg(args.scale, g.n)
    if args.method == "chordal":
        value = chordal_constant(g, args.delta, scale)
        print(_fmt(value.log_magnitude, args.full_precision))
    elif args.method == "mc":
        est = mc_constant(g, args.delta, scale, args.samples, args.seed)
        print(f"{_fmt(est.log_value, args.full_precision)},"
              f"{_fmt(est.std_error, args.full_precision)}")
    elif args.method == "roverato":
        c_identity = _identity_constant(g, args.delta)
        value = roverato_estimate(g, args.delta, scale, c_identity)
        print(_fmt(value.log_magnitude, args.full_precision))
    return EXIT_OK


def _fourier_via_chord(g: Graph, delta: float, scale: np.ndarray):
    for chord in g.non_edges():
        completed = g.add_edge(*chord)
        if is_chordal(completed)[0]:
            return fourier_constant(completed, chord, delta, scale)
    raise ValueError("no chord completes the graph to a chordal one")


def cmd_complete(args) -> int:
    g = load_graph_arg(args.graph)
    scale = load_scale_arg(args.scale, g.n)
    result = pd_complete(scale, g)
    out, close = _open_out(args.out)
    try:
        out.write(f"# iterations={result.iterations} residual={result.residual:.3e}\n")
        for row in result.completed:
            out.write(",".join(_fmt(v, args.full_precision) for v in row) + "\n")
    finally:
        if close:
            out.close()
    return EXIT_OK


def cmd_ratio_figure(args) -> int:
    rows = figure1_table(args.delta_max)
    out, close = _open_out(args.out)
    try:
        write_figure1_csv(rows, out, args.full_precision)
    finally:
        if close:
            out.close()
    if args.out is not None:
        from .plots import save_ratio_figure
        save_ratio_figure(rows, Path(args.out).with_suffix(".png"))
    return EXIT_OK


def _iris_config(args) -> IrisConfig:
    return IrisConfig(data_path=args.data, centering=args.centering,
                      mc_samples=args.samples, mc_seed=args.seed)


def cmd_iris_table(args) -> int:
    table = iris_table(_iris_config(args))
    out, close = _open_out(args.out)
    try:
        write_iris_csv(table, out, args.full_precision)
    finally:
        if close:
            out.close()
    for row in table.rows:
        if not row.gate_ok:
            print(f"warning: graph {row.graph_id}: fourier value is outside "
                  f"3 std errors of the Monte Carlo check", file=sys.stderr)
    if args.centering == "auto" and not table.matched:
        return EXIT_TOLERANCE
    return EXIT_OK


def cmd_mc_violin(args) -> int:
    data = violin_data(_iris_config(args), seeds=args.seeds, samples=args.samples)
    out, close = _open_out(args.out)
    try:
        write_violin_csv(data, out, args.full_precision)
    finally:
        if close:
            out.close()
    if args.out is not None:
        from .plots import save_violin_figure
        save_violin_figure(data.graphs, Path(args.out).with_suffix(".png"))
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    from .selfcheck import run_selfcheck
    return EXIT_OK if run_selfcheck(sys.stdout) else EXIT_TOLERANCE


def _fmt(x: float, full_precision: bool) -> str:
    return repr(float(x)) if full_precision else f"{x:.6g}"


def build_parser() -> CliParser:
    parser = CliParser(prog="gwishart",
                       description="G-Wishart normalising constants by four routes")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", help="write CSV here instead of stdout")
        p.add_argument("--full-precision", action="store_true",
                       help="emit full float precision instead of 6 significant digits")

    p = sub.add_parser("constant", help="one normalising constant, one method")
    p.add_argument("--graph", help="graph file or inline 'n:4;edges:1-2,...'")
    p.add_argument("--gstar", help="chordal graph for the fourier method")
    p.add_argument("--drop-edge", help="edge 'mu-nu' removed from gstar")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--scale", help="matrix CSV path or 'identity' (default)")
    p.add_argument("--method", required=True,
                   choices=["chordal", "fourier", "mc", "roverato"])
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--full-precision", action="store_true")
    p.set_defaults(func=cmd_constant)

    p = sub.add_parser("complete", help="positive definite completion of a scale")
    p.add_argument("--graph", required=True)
    p.add_argument("--scale", help="matrix CSV path or 'identity' (default)")
    add_common(p)
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("ratio-figure", help="true versus estimated ratio per delta")
    p.add_argument("--delta-max", type=int, default=10)
    add_common(p)
    p.set_defaults(func=cmd_ratio_figure)

    def add_iris(p):
        p.add_argument("--data", help="CSV with 4 numeric columns (default: packaged data)")
        p.add_argument("--centering", choices=["auto", "centered", "uncentered"],
                       default="auto")
        p.add_argument("--samples", type=int, default=1000)
        p.add_argument("--seed", type=int, default=0)
        add_common(p)

    p = sub.add_parser("iris-table", help="three-route posterior table")
    add_iris(p)
    p.set_defaults(func=cmd_iris_table)

    p = sub.add_parser("mc-violin", help="replicate Monte Carlo estimates per graph")
    add_iris(p)
    p.add_argument("--seeds", type=int, default=200)
    p.set_defaults(func=cmd_mc_violin)

    p = sub.add_parser("selfcheck", help="run the identity and property suites")
    p.set_defaults(func=cmd_selfcheck)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ScatterConventionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("candidate centered scatter:", file=sys.stderr)
        print(np.array2string(exc.u_centered, precision=6), file=sys.stderr)
        print("candidate uncentered scatter:", file=sys.stderr)
        print(np.array2string(exc.u_uncentered, precision=6), file=sys.stderr)
        return EXIT_TOLERANCE
    except (QuadratureError, CompletionError, DegenerateSampleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except (ValueError, OSError, NotChordalError, NotPositiveDefiniteError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
