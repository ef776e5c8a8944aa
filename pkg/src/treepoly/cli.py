"""Command-line entry point: ``treepoly <command> ...``.

Commands::

    compute      print an invariant of a tree (or forest)
    enumerate    list all rooted trees / forests of a size
    collide      collision classes of an invariant at one size, or a sweep
    verify       exhaustive identity and oracle checks up to a size
    simulate     Monte Carlo percolation / cutting vs the exact polynomials
    reconstruct  find all trees with a given invariant polynomial

Exit codes: 0 success, 1 usage error, 2 unparsable tree or polynomial,
3 a verification or statistical check failed.

``--format records`` prints one JSON object per result line.  Collision
records carry the keys ``invariant``, ``n``, ``forests``, ``polynomial`` and
``trees``; completeness rows carry ``invariant``, ``n``, ``scanned``,
``classes`` and ``colliding``.

Polynomials on the command line use the printed grammar, e.g.
``'x^3*y + x^4*y + 1'``; quote them so the shell leaves ``*`` and ``^`` alone.
Tree arguments use the parenthesis grammar, e.g. ``'(()(()))'``, or a
level sequence such as ``'0 1 2 1'`` with ``--level-seq``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from typing import Optional, Sequence

from . import analysis
from .enumeration import enumerate_forests, enumerate_rooted_trees
from .percolation import compare_histogram, compare_p, quantize_probability
from .poly import PolyParseError, parse_poly, serialize_poly
from .trees import RootedTree, TreeParseError, level_sequence, parse_forest, parse_level_sequence, parse_tree

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_FAILED = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _probability(text: str):
    try:
        return quantize_probability(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="treepoly", description="Polynomial invariants of rooted trees.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_tree_input(p):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("tree", nargs="?", help="tree in parenthesis form")
        src.add_argument("--file", help="read the tree (or forest, one tree per line) from a file")
        p.add_argument("--level-seq", action="store_true", help="input is a pre-order depth sequence")

    p = sub.add_parser("compute", help="print an invariant")
    p.add_argument("--invariant", "-i", required=True, choices=analysis.INVARIANTS)
    add_tree_input(p)

    p = sub.add_parser("enumerate", help="list trees of a size in generation order")
    p.add_argument("--n", type=_nonneg, required=True)
    p.add_argument("--forests", action="store_true", help="list forests on n vertices instead")
    p.add_argument("--level-seq", action="store_true", help="print depth sequences")

    p = sub.add_parser("collide", help="collision classes of an invariant")
    p.add_argument("--invariant", "-i", required=True, choices=analysis.INVARIANTS)
    size = p.add_mutually_exclusive_group(required=True)
    size.add_argument("--n", type=_nonneg)
    size.add_argument("--n-max", type=_nonneg, help="summarize every size up to this one")
    p.add_argument("--forests", action="store_true", help="sweep forests (P and S only)")
    p.add_argument("--shards", type=_positive, default=1)
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--allow-large", action="store_true", help="lift the default size bounds")
    p.add_argument("--format", choices=("text", "records"), default="text")

    p = sub.add_parser("verify", help="exhaustive exact checks")
    p.add_argument("--n-max", type=_positive, required=True)
    p.add_argument("--oracle-max", type=_nonneg, default=8, help="largest size for the P/S/A oracles")
    p.add_argument("--oracle-m-max", type=_nonneg, default=10, help="largest size for the M oracle")
    p.add_argument("--format", choices=("text", "records"), default="text")

    p = sub.add_parser("simulate", help="Monte Carlo check against exact values")
    add_tree_input(p)
    p.add_argument("--mode", choices=("percolation", "cutting"), required=True)
    p.add_argument("--q", type=_probability, default=None,
                   help="keep probability (percolation); rounded to a multiple of 2^-16")
    p.add_argument("--samples", type=_positive, default=100_000)
    p.add_argument("--seed", type=_nonneg, default=0)
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--format", choices=("text", "records"), default="text")

    p = sub.add_parser("reconstruct", help="trees with a given invariant")
    p.add_argument("--invariant", "-i", required=True, choices=("P", "p", "S", "A", "M"))
    p.add_argument("--poly", required=True)
    p.add_argument("--format", choices=("text", "records"), default="text")
    return parser


def _read_input(args):
    text = args.tree
    if args.file is not None:
        with open(args.file, encoding="ascii") as fh:
            text = fh.read()
    if args.level_seq:
        return parse_level_sequence(text)
    if args.file is not None:
        forest = parse_forest(text)
        return forest.trees[0] if len(forest.trees) == 1 else forest
    return parse_tree(text)


def _emit(args, record: dict, text: str):
    if getattr(args, "format", "text") == "records":
        print(json.dumps(record, sort_keys=True))
    else:
        print(text)


def cmd_compute(args) -> int:
    obj = _read_input(args)
    if not isinstance(obj, RootedTree) and args.invariant not in ("P", "S", "A"):
        raise UsageError(f"invariant {args.invariant} needs a single tree")
    print(analysis.invariant_key(args.invariant, obj))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    if args.forests:
        for f in enumerate_forests(args.n):
            print(analysis.encode(f))
        return EXIT_OK
    if args.n < 1:
        raise UsageError("trees need n >= 1")
    for t in enumerate_rooted_trees(args.n):
        print(" ".join(map(str, level_sequence(t))) if args.level_seq else t.key)
    return EXIT_OK


def cmd_collide(args) -> int:
    try:
        if args.n_max is not None:
            rows = analysis.completeness_report(
                args.invariant, args.n_max, args.forests, args.shards, args.jobs, args.allow_large)
            for row in rows:
                _emit(args, {"invariant": args.invariant, **asdict(row)},
                      f"{args.invariant} n={row.n}: {row.scanned} scanned, "
                      f"{row.classes} collision classes, {row.colliding} colliding")
            return EXIT_OK
        report = analysis.collision_search(
            args.invariant, args.n, args.shards, args.jobs, args.forests, args.allow_large)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "records":
        for rec in report.records():
            print(json.dumps(rec, sort_keys=True))
        return EXIT_OK
    kind = "forests" if report.forests else "trees"
    print(f"{report.invariant} n={report.n}: {report.scanned} {kind}, {len(report.classes)} collision classes")
    for cls in report.classes:
        print(f"  {cls.polynomial}")
        for code in cls.trees:
            print(f"    {code}")
    return EXIT_OK


def cmd_verify(args) -> int:
    progress = (lambda msg: print(msg, file=sys.stderr)) if args.format == "text" else None
    failures = analysis.verify_all(args.n_max, args.oracle_max, args.oracle_m_max, progress)
    for f in failures:
        _emit(args, asdict(f), f"FAIL {f.check} on {f.subject}: {f.lhs} != {f.rhs}")
    if failures:
        print(f"{len(failures)} checks failed", file=sys.stderr)
        return EXIT_FAILED
    if args.format == "text":
        print(f"all checks passed for n <= {args.n_max}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    t = _read_input(args)
    if not isinstance(t, RootedTree):
        raise UsageError("simulation needs a single tree")
    if args.mode == "percolation":
        if args.q is None:
            raise UsageError("--q is required for percolation")
        results = [compare_p(t, args.q, args.samples, args.seed, args.jobs)]
    else:
        results = compare_histogram(t, args.samples, args.seed, args.jobs)
    ok = True
    for c in results:
        ok &= c.passed
        rec = {
            "label": c.label, "exact": str(c.exact), "estimate": c.estimate.value,
            "stderr": c.estimate.stderr, "sigma": c.sigma, "samples": c.estimate.samples,
            "seed": args.seed, "pass": c.passed,
        }
        _emit(args, rec,
              f"{c.label:<22} estimate={c.estimate.value:.6f} stderr={c.estimate.stderr:.6f} "
              f"exact={float(c.exact):.6f} ({c.exact}) {'PASS' if c.passed else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_reconstruct(args) -> int:
    target = parse_poly(args.poly)
    try:
        trees = analysis.reconstruct_from_polynomial(args.invariant, target)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    for t in trees:
        _emit(args, {"invariant": args.invariant, "polynomial": serialize_poly(target), "tree": t.key}, t.key)
    if not trees:
        print("no tree has this polynomial", file=sys.stderr)
    return EXIT_OK


COMMANDS = {
    "compute": cmd_compute,
    "enumerate": cmd_enumerate,
    "collide": cmd_collide,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
    "reconstruct": cmd_reconstruct,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (TreeParseError, PolyParseError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
