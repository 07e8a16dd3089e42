"""Command-line interface: ``syzygy verify|row|betti|rank``.

Exit codes: 0 success, 2 invalid input, 3 resource cap, 4 verification failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import __version__
from .construction import ASSUMED, betti_table, build_instance, gonality_row, verify_theorem
from .errors import IdentityFailure, ResourceCap, SyzygyError
from .ff import DEFAULT_PRIME, make_field
from .koszul import ELIMINATION, WIEDEMANN
from .linalg import BACKEND, rank_elimination, rank_wiedemann, read_matrix_text

SCHEMA_VERSION = "1"

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE, EXIT_FAILED = 0, 2, 3, 4

_METHODS = {"elim": ELIMINATION, "wiedemann": WIEDEMANN}

log = logging.getLogger("syzygy")


def _threads(n: int) -> int:
    return os.cpu_count() or 1 if n == 0 else max(1, n)


def _entry(report, **extra) -> dict:
    d = report.as_dict()
    d.update(extra)
    return d


def _document(args, inst, entries, **fields) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": {
            "name": args.command,
            "k": args.k,
            "prime": args.prime,
            "curve": args.curve,
            "method": _METHODS[args.method],
            "seed": args.seed,
        },
        "prime": inst.ctx.p,
        "k": inst.k,
        "curve": inst.curve.descriptor,
        "smoothness": inst.smoothness,
        "assumed": list(ASSUMED),
        "instance": inst.summary(),
        "entries": entries,
        "violation_index": inst.violation_index,
        "conjectural_bound": inst.conjectural_bound,
    }
    if inst.singular_points is not None:
        doc["singular_points_fp"] = [list(pt) for pt in inst.singular_points]
    doc.update(fields)
    return doc


def _emit(args, doc: dict, timings: dict | None, table: str) -> None:
    if timings is not None and args.timings:
        doc["timings_ms"] = timings
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.json == "-":
        sys.stdout.write(text)
        return
    sys.stdout.write(table)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text)


def _table(headers, rows) -> str:
    cells = [list(map(str, headers))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _header(inst, method) -> str:
    return (
        f"k={inst.k}  p={inst.ctx.p}  curve={inst.curve.descriptor} ({inst.smoothness})\n"
        f"g={inst.g}  deg L={inst.deg_L} (= 2g+k-1)  h0(L)={inst.h0}  method={method}\n"
    )


_COLS = ("side", "p", "q", "dim_middle", "rank_out", "rank_in", "dim_K", "certified")


def cmd_verify(args) -> int:
    method = _METHODS[args.method]
    if args.certify and method != ELIMINATION:
        print("error: --certify requires --method elim (Wiedemann may under-report rank)", file=sys.stderr)
        return EXIT_USAGE
    ctx = make_field(args.prime)
    rep = verify_theorem(args.k, ctx, args.curve, method, with_injection=args.injection,
                         seed=args.seed, threads=_threads(args.threads))
    inst = rep.instance
    entries = [_entry(rep.veronese_K), _entry(rep.curve_K)]
    extra = {
        "theorem_holds": rep.theorem_holds,
        "veronese_le_curve": rep.veronese_le_curve,
        "certified": rep.certified,
        "passed": rep.passed,
    }
    if rep.injection is not None:
        extra["injection"] = rep.injection.as_dict()
    doc = _document(args, inst, entries, **extra)
    rows = [[e[c] for c in _COLS] for e in entries]
    table = _header(inst, rep.method) + _table(_COLS, rows)
    status = "HOLDS" if rep.theorem_holds else "FAILS"
    table += (f"K_{{{rep.violation_index},1}}(C,L) = {rep.curve_K.dim_K}: non-vanishing {status} "
              f"at i = h0-k = {rep.violation_index} > {rep.conjectural_bound}"
              f" ({'certified' if rep.certified else 'probabilistic'})\n")
    if rep.injection is not None:
        inj = rep.injection
        table += f"injection K(P2) -> K(C): {'injective' if inj.injective else 'NOT injective'} " \
                 f"({inj.dim_source} -> {inj.dim_target})\n"
    table += "timings_ms: " + ", ".join(f"{k}={v}" for k, v in rep.timings_ms.items()) + "\n"
    _emit(args, doc, rep.timings_ms, table)
    return EXIT_OK if rep.passed else EXIT_FAILED


def cmd_row(args) -> int:
    ctx = make_field(args.prime)
    inst = build_instance(args.k, ctx, args.curve)
    to = inst.h0 if args.to is None else args.to
    try:
        row = gonality_row(args.k, ctx, args.curve, args.i_from, to, _METHODS[args.method],
                           seed=args.seed, threads=_threads(args.threads))
    except ValueError as exc:
        if isinstance(exc, SyzygyError):
            raise
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    entries = [_entry(r.report, conjecture_predicts_zero=r.conjecture_predicts_zero) for r in row]
    violations = [e["p"] for e in entries if e["conjecture_predicts_zero"] and e["dim_K"] > 0]
    doc = _document(args, inst, entries, violations=violations)
    cols = ("i", "dim_K", "conjecture_predicts_zero", "dim_middle", "rank_out", "rank_in", "certified")
    rows = [[e["p"], e["dim_K"], e["conjecture_predicts_zero"], e["dim_middle"], e["rank_out"],
             e["rank_in"], e["certified"]] for e in entries]
    table = _header(inst, _METHODS[args.method]) + _table(cols, rows)
    table += f"conjecture: K_{{i,1}} != 0 iff 1 <= i <= {inst.conjectural_bound}; " \
             f"violated at i in {violations}\n"
    _emit(args, doc, None, table)
    return EXIT_OK


def cmd_betti(args) -> int:
    ctx = make_field(args.prime)
    inst = build_instance(args.k, ctx, args.curve)
    try:
        reports = betti_table(args.k, ctx, args.curve, args.side, args.qmax, args.pmax,
                              _METHODS[args.method], seed=args.seed, threads=_threads(args.threads))
    except ValueError as exc:
        if isinstance(exc, SyzygyError):
            raise
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    entries = [_entry(r) for r in reports]
    doc = _document(args, inst, entries, side=args.side)
    ps = sorted({r.p for r in reports})
    grid = [[f"q={q}"] + [next(r.dim_K for r in reports if r.p == p and r.q == q) for p in ps]
            for q in sorted({r.q for r in reports})]
    table = _header(inst, _METHODS[args.method]) + f"side={args.side}\n" + \
        _table(["K_{p,q}"] + [f"p={p}" for p in ps], grid)
    _emit(args, doc, None, table)
    return EXIT_OK


def cmd_rank(args) -> int:
    try:
        with open(args.matrix) as fh:
            M = read_matrix_text(fh)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.prime is not None and args.prime != M.p:
        print(f"error: matrix modulus {M.p} differs from --prime {args.prime}", file=sys.stderr)
        return EXIT_USAGE
    if _METHODS[args.method] == ELIMINATION:
        r = rank_elimination(M)
    else:
        r = rank_wiedemann(M, seed=args.seed).rank
    print(r)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="syzygy",
        description="Koszul cohomology of plane curves over Z/p and the gonality-bound counterexample.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--method", choices=sorted(_METHODS), default="elim")
    shared.add_argument("--seed", type=int, default=0, help="Wiedemann seed")
    shared.add_argument("--threads", type=int, default=1, help="worker threads, 0 = auto")

    inst = argparse.ArgumentParser(add_help=False, parents=[shared])
    inst.add_argument("--k", type=int, required=True)
    inst.add_argument("--prime", type=int, default=DEFAULT_PRIME)
    inst.add_argument("--curve", default="fermat", help="fermat | random:<seed> | file:<path>")
    inst.add_argument("--json", metavar="PATH", help="write the JSON report here ('-' for stdout)")
    inst.add_argument("--timings", action="store_true", help="include wall-clock timings in the JSON")

    p = sub.add_parser("verify", parents=[inst], help="certify K_{h0-k,1}(C,L) != 0")
    p.add_argument("--injection", action="store_true", help="also check K(P2, O(k-1)) -> K(C, L) is injective")
    p.add_argument("--certify", action="store_true", help="refuse probabilistic rank methods")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("row", parents=[inst], help="dim K_{i,1}(C,L) across i")
    p.add_argument("--from", dest="i_from", type=int, default=0)
    p.add_argument("--to", type=int, default=None)
    p.set_defaults(func=cmd_row)

    p = sub.add_parser("betti", parents=[inst], help="Koszul table for q <= qmax")
    p.add_argument("--side", choices=["curve", "veronese"], default="veronese")
    p.add_argument("--qmax", type=int, choices=[0, 1, 2], default=1)
    p.add_argument("--pmax", type=int, default=None)
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("rank", parents=[shared], help="rank of a matrix in text format")
    p.add_argument("--matrix", required=True)
    p.add_argument("--prime", type=int, default=None)
    p.set_defaults(func=cmd_rank)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ResourceCap as exc:
        print(f"error: ResourceCap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except IdentityFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except SyzygyError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
