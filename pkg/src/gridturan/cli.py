"""Command line entry point: ``gridturan <subcommand> ...``.

Graphs travel in the canonical edge-list format; reports are ``key=value``
lines.  Exit codes: 0 found/success, 1 not found or budget-partial, 2 error.
Error messages go to stderr as ``error[<id>]: <message>``.
"""

from __future__ import annotations

import argparse
import re
import sys
from fractions import Fraction

from gridturan import generators as gen
from gridturan.cleaning import clean_subgraph
from gridturan.embedder import EmbeddingFailure, embed_tree_product, validate_tree
from gridturan.errors import GraphFormatError, PreconditionError, ResourceLimitError
from gridturan.graph import Graph, edge_density_alpha, format_graph, parse_graph
from gridturan.ladders import HarvestFailure, harvest_good_ladders
from gridturan.oracle import (
    DiagonalAssignment,
    all_assignments,
    diagonal_crossing,
    turan_number,
    verify_lower_bound_construction,
)

DEFAULT_SEED = 20240101

EXIT_OK, EXIT_NOT_FOUND, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    def __init__(self, ident: str, message: str):
        self.ident = ident
        super().__init__(message)


def _read_graph(path: str) -> Graph:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path) as fh:
                text = fh.read()
    except OSError as exc:
        raise CliError("io-error", f"cannot read {path}: {exc.strerror}") from None
    return parse_graph(text)


def _write_text(path: str | None, text: str, out) -> None:
    if path is None or path == "-":
        out.write(text)
        return
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError("io-error", f"cannot write {path}: {exc.strerror}") from None


def _kv(pairs) -> str:
    return "".join(f"{k}={v}\n" for k, v in pairs)


def _fmt_bool(b) -> str:
    return "unchecked" if b is None else str(bool(b)).lower()


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


# -- subcommands -------------------------------------------------------------------


def cmd_gen(args, out) -> int:
    kind = args.type

    def need(name):
        v = getattr(args, name)
        if v is None:
            raise CliError("missing-flag", f"--{name} is required for --type {kind}")
        return v

    if kind == "path":
        G = gen.make_path(need("n"))
    elif kind == "cycle":
        G = gen.make_cycle(need("n"))
    elif kind == "complete":
        G = gen.make_complete(need("n"))
    elif kind == "star":
        G = gen.make_star(need("n"))
    elif kind == "grid":
        G = gen.make_grid(need("t"), args.d)
    elif kind == "polarity":
        G = gen.polarity_graph(need("q"))
    elif kind == "random":
        if args.p is None:
            raise CliError("missing-flag", "--p is required for --type random")
        G = gen.random_graph(need("n"), args.p, args.seed)
    elif kind == "blowup":
        G = gen.blowup(_read_graph(need("input")), need("r"))
    elif kind == "tensor":
        G = gen.tensor_power(_read_graph(need("input")), need("k"), mode="explicit").graph
    else:  # pragma: no cover - argparse restricts choices
        raise CliError("invalid-argument", f"unknown type {kind}")
    _write_text(args.output, format_graph(G), out)
    return EXIT_OK


def cmd_clean(args, out) -> int:
    G = _read_graph(args.input)
    H, report = clean_subgraph(G)
    _write_text(args.output, format_graph(H), out)
    if args.report:
        _write_text(args.report, "".join(line + "\n" for line in report.lines()), out)
    return EXIT_OK


def cmd_ladders(args, out) -> int:
    G = _read_graph(args.input)
    alpha = args.alpha
    if alpha is None:
        if G.m == 0:
            raise CliError("invalid-argument", "graph has no edges")
        alpha = Fraction(edge_density_alpha(G)).limit_denominator(10**6)
    view = gen.tensor_power(G, args.k)
    try:
        res = harvest_good_ladders(
            view, args.t, alpha, materialize=not args.count_only, strict=args.strict, budget=args.budget
        )
    except HarvestFailure as exc:
        out.write(_kv([("found", "false"), ("failed_step", exc.step)]))
        return EXIT_NOT_FOUND
    pairs = [
        ("t", args.t),
        ("k", args.k),
        ("alpha", float(alpha)),
        ("count", res.count),
        ("s", ",".join(str(s) for s in res.spec.s)),
        ("bound", f"{res.bound:.6g}"),
        ("pigeonhole_ok", _fmt_bool(all(r.meets_pigeonhole for r in res.step_log))),
    ]
    out.write(_kv(pairs))
    if args.spec_out:
        _write_text(args.spec_out, "".join(f"{s}\n" for s in res.spec.s), out)
    if args.ladders_out and res.ladders is not None:
        lines = (" ".join(",".join(map(str, x)) for x in L) + "\n" for L in res.ladders)
        _write_text(args.ladders_out, "".join(lines), out)
    return EXIT_OK


_PATH_SHORTHAND = re.compile(r"^P(\d+)$")


def _load_tree(spec: str) -> Graph:
    m = _PATH_SHORTHAND.match(spec)
    T = gen.make_path(int(m.group(1))) if m else _read_graph(spec)
    try:
        validate_tree(T)
    except ValueError as exc:
        raise CliError("invalid-tree", str(exc)) from None
    return T


def cmd_embed(args, out) -> int:
    G = _read_graph(args.host)
    T = _load_tree(args.tree)
    try:
        emb = embed_tree_product(
            G,
            T,
            args.t,
            k=args.k,
            alpha=args.alpha,
            collision_budget=args.collision_budget,
            seed=args.seed,
            max_ladders=args.budget,
            restarts=args.restarts,
        )
    except EmbeddingFailure as exc:
        out.write(_kv([("found", "false"), ("stage", exc.stage)]))
        return EXIT_NOT_FOUND
    body = _kv([("found", "true"), ("coordinate", emb.coordinate)])
    body += "".join(line + "\n" for line in emb.lines())
    _write_text(args.output, body, out)
    return EXIT_OK


def cmd_turan(args, out) -> int:
    H = _read_graph(args.forbidden)
    res = turan_number(args.n, H, time_budget=args.budget, threads=args.threads)
    out.write(_kv([("n", res.n), ("value", res.value), ("exact", _fmt_bool(res.exact))]))
    if args.witness:
        _write_text(args.witness, format_graph(res.witness), out)
    return EXIT_OK if res.exact else EXIT_NOT_FOUND


def cmd_diagonals(args, out) -> int:
    if args.exhaustive:
        total = 0
        for a in all_assignments(args.t):
            diagonal_crossing(a)
            total += 1
        out.write(_kv([("t", args.t), ("assignments", total), ("verified", total)]))
        return EXIT_OK
    try:
        a = DiagonalAssignment.from_string(args.t, args.assignment)
    except ValueError as exc:
        raise CliError("invalid-assignment", str(exc)) from None
    p = diagonal_crossing(a)
    pts = " ".join(f"{r},{c}" for r, c in p.points)
    out.write(_kv([("t", args.t), ("direction", p.direction), ("length", len(p.points)), ("path", pts)]))
    return EXIT_OK


def cmd_verify_lb(args, out) -> int:
    rep = verify_lower_bound_construction(args.q, args.t, time_budget=args.budget)
    out.write("".join(line + "\n" for line in rep.lines()))
    return EXIT_OK if rep.ft_free and rep.base_c4_free else EXIT_NOT_FOUND


# -- argument parsing -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gridturan", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=_positive, default=1, help="worker processes (output does not depend on it)")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a graph")
    g.add_argument(
        "--type",
        required=True,
        choices=["path", "cycle", "complete", "star", "grid", "polarity", "random", "blowup", "tensor"],
    )
    g.add_argument("--n", type=int, help="vertices (path, cycle, complete, random) or leaves (star)")
    g.add_argument("--t", type=int, help="grid side")
    g.add_argument("--d", type=int, default=2, help="grid dimension")
    g.add_argument("--q", type=int, help="prime for the polarity graph")
    g.add_argument("--p", type=float, help="edge probability")
    g.add_argument("--r", type=int, help="blowup factor")
    g.add_argument("--k", type=int, help="tensor power")
    g.add_argument("--input", help="base graph for blowup/tensor")
    g.add_argument("--seed", type=int, default=DEFAULT_SEED)
    g.add_argument("--output")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("clean", help="delete vertices and edges until the codegree conditions hold")
    c.add_argument("--input", required=True)
    c.add_argument("--output")
    c.add_argument("--report", help="deletion log, one 'T1 v' or 'T2 u v' per line")
    c.set_defaults(func=cmd_clean)

    lad = sub.add_parser("ladders", help="harvest good ladders in a tensor power")
    lad.add_argument("--input", required=True)
    lad.add_argument("--t", type=_positive, required=True)
    lad.add_argument("--k", type=_positive, default=1)
    lad.add_argument("--alpha", type=_parse_fraction, help="codegree floor (default: edge density e/n^1.5)")
    lad.add_argument("--count-only", action="store_true")
    lad.add_argument("--strict", action="store_true", help="refuse alpha < 4t")
    lad.add_argument("--budget", type=_positive, default=5_000_000, help="maximum partial ladders held")
    lad.add_argument("--spec-out")
    lad.add_argument("--ladders-out")
    lad.set_defaults(func=cmd_ladders)

    e = sub.add_parser("embed", help="find T x P_t through good ladders")
    e.add_argument("--host", required=True)
    e.add_argument("--tree", required=True, help="edge-list file or P<r> for a path on r vertices")
    e.add_argument("--t", type=_positive, required=True)
    e.add_argument("--k", type=_positive, default=1)
    e.add_argument("--alpha", type=_parse_fraction, default=Fraction(2))
    e.add_argument("--collision-budget", type=int)
    e.add_argument("--budget", type=_positive, default=100_000, help="maximum harvested ladders")
    e.add_argument("--restarts", type=_positive, default=32)
    e.add_argument("--seed", type=int, default=DEFAULT_SEED)
    e.add_argument("--output")
    e.set_defaults(func=cmd_embed)

    tu = sub.add_parser("turan", help="exact ex(n, H) for small n")
    tu.add_argument("--n", type=_positive, required=True)
    tu.add_argument("--forbidden", required=True)
    tu.add_argument("--budget", type=float, help="seconds")
    tu.add_argument("--witness", help="write an extremal graph here")
    tu.set_defaults(func=cmd_turan)

    d = sub.add_parser("diagonals", help="check crossing paths of diagonal placements")
    d.add_argument("--t", type=int, required=True)
    mode = d.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--assignment", help="row-major bits, 1 = '/'")
    d.set_defaults(func=cmd_diagonals)

    v = sub.add_parser("verify-lb", help="check the polarity-graph blowup avoids the t x t grid")
    v.add_argument("--q", type=int, required=True)
    v.add_argument("--t", type=int, required=True)
    v.add_argument("--budget", type=float, help="seconds for the grid search")
    v.set_defaults(func=cmd_verify_lb)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    if getattr(args, "t", None) is not None and args.command == "diagonals" and args.t < 2:
        err.write("error[invalid-argument]: --t must be at least 2\n")
        return EXIT_ERROR
    try:
        return args.func(args, out)
    except CliError as exc:
        ident, msg = exc.ident, str(exc)
    except GraphFormatError as exc:
        ident, msg = "parse-error", str(exc)
    except PreconditionError as exc:
        ident, msg = "precondition", str(exc)
    except ResourceLimitError as exc:
        ident, msg = "resource-limit", str(exc)
    except ValueError as exc:
        ident, msg = "invalid-argument", str(exc)
    err.write(f"error[{ident}]: {msg}\n")
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
