"""Command line: collection, arithmetic, benchmarks, Hall degrees and self tests.

Exit codes: 0 success, 1 test failure, 2 usage error, 3 resource guard tripped.
"""
from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass
from random import Random
from typing import Sequence

from .checks import (CheckResult, agreement, axioms, oracle, presentation_validation,
                     supported_methods, word_agreement)
from .classical import UnsupportedCharacteristic
from .collect import (BudgetExceeded, CollectedElement, WordSyntaxError, collect,
                      from_root_coeffs, parse_word, random_element, reorder, word_from_terms)
from .methods import METHODS, default_ordering, get_method
from .presentation import presentation
from .rings import Ring, RingError, count_ops, ring_from_spec
from .rootsystem import RootSystemError, build_root_system, representation_order
from .symbolic import DEFAULT_NODE_CAP, MemoryGuard, build_symbolic_tables, hall_degree_stats, table_report

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
COLLECT_METHODS = ("ctl", "cfl", "cfo", "generic")


class UsageError(Exception):
    pass


# --- output -------------------------------------------------------------------------

def render(header: Sequence[str], rows: Sequence[Sequence], fmt: str) -> str:
    if fmt == "csv":
        return "\n".join(",".join(map(str, r)) for r in [header, *rows])
    cells = [list(map(str, header))] + [list(map(str, r)) for r in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(header))]
    line = lambda r: "| " + " | ".join(c.ljust(w) for c, w in zip(r, widths)) + " |"
    sep = "|" + "|".join("-" * (w + 2) for w in widths) + "|"
    return "\n".join([line(cells[0]), sep] + [line(r) for r in cells[1:]])


def format_element(ring: Ring, x: CollectedElement, fmt: str) -> str:
    if fmt == "csv":
        return x.csv_row(ring)
    return x.format(ring)


# --- argument handling -----------------------------------------------------------------

def _common(p: argparse.ArgumentParser, method_default: str | None = None):
    p.add_argument("--type", default="A", help="Cartan type A, B, C or D")
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--field", default="fp:17", help="fp:<p>, q or poly:<nvars>")
    p.add_argument("--bits", type=int, default=32, help="size of random rationals")
    p.add_argument("--method", default=method_default)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--format", choices=("csv", "markdown"), default="markdown")
    p.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP,
                   help="node limit for symbolic tables")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unipotent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("collect", help="collect a word into normal form")
    _common(p, "cfo")
    p.add_argument("word", nargs="?", default="", help='e.g. "x[3](5) x[1](2)^-1"')
    p.add_argument("--native", action="store_true",
                   help="print in the method's ordering instead of representation order")

    p = sub.add_parser("mul", help="multiply two elements given in representation order")
    _common(p, "cfo")
    p.add_argument("x")
    p.add_argument("y")

    p = sub.add_parser("inv", help="invert an element given in representation order")
    _common(p, "cfo")
    p.add_argument("x")

    p = sub.add_parser("bench", help="op counts and timings per method")
    _common(p, ",".join(METHODS))

    p = sub.add_parser("halldeg", help="degrees of the Hall polynomials")
    _common(p, "cfl,cfo")
    p.add_argument("--max-rank", type=int, default=None, help="report ranks rank..max-rank")
    p.add_argument("--entries", action="store_true", help="print per-entry table metadata")

    p = sub.add_parser("selftest", help="run the consistency suites")
    _common(p)
    p.add_argument("--quick", action="store_true")
    p.add_argument("--mutate-table", action="store_true",
                   help="corrupt one structure constant and expect failures")
    return parser


def _root_system(args):
    try:
        return build_root_system(args.type.upper(), args.rank)
    except (RootSystemError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _ring(args) -> Ring:
    try:
        return ring_from_spec(args.field, args.bits)
    except (RingError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _methods(args) -> list[str]:
    names = [m.strip().lower() for m in (args.method or "").split(",") if m.strip()]
    return names


def _parse_element(text: str, rs, ring: Ring) -> CollectedElement:
    parts = [p.strip() for p in text.split(",")] if text.strip() else []
    if len(parts) != rs.N:
        raise UsageError(f"expected {rs.N} comma-separated coefficients, got {len(parts)}")
    try:
        vals = [ring.parse(p) for p in parts]
    except Exception as exc:
        raise UsageError(f"bad coefficient: {exc}") from None
    return from_root_coeffs(representation_order(rs), vals)


def _single_method(args, allowed: Sequence[str]) -> str:
    names = _methods(args)
    if len(names) != 1 or names[0] not in allowed:
        raise UsageError(f"--method must be one of {', '.join(allowed)}")
    return names[0]


# --- commands ------------------------------------------------------------------------

def cmd_collect(args, out) -> int:
    rs, ring = _root_system(args), _ring(args)
    method = _single_method(args, COLLECT_METHODS)
    try:
        terms = parse_word(args.word, rs, ring)
    except WordSyntaxError as exc:
        raise UsageError(str(exc)) from None
    pres = presentation(rs, default_ordering(rs, method))
    if method == "cfo" and not pres.ordering.additive:
        raise UsageError("CFO needs an additive ordering")
    x = collect(pres, word_from_terms(pres, ring, terms), method)
    if not args.native:
        x = reorder(ring, x, representation_order(rs))
    print(format_element(ring, x, args.format), file=out)
    return EXIT_OK


def _arith(args, out, op: str) -> int:
    rs, ring = _root_system(args), _ring(args)
    M = get_method(rs, _single_method(args, METHODS), args.node_cap)
    try:
        M.prepare(ring)
    except UnsupportedCharacteristic as exc:
        raise UsageError(str(exc)) from None
    x = M.element(ring, _parse_element(args.x, rs, ring))
    if op == "mul":
        z = M.multiply(ring, x, M.element(ring, _parse_element(args.y, rs, ring)))
    else:
        z = M.invert(ring, x)
    print(format_element(ring, reorder(ring, z, representation_order(rs)), args.format), file=out)
    return EXIT_OK


def cmd_mul(args, out) -> int:
    return _arith(args, out, "mul")


def cmd_inv(args, out) -> int:
    return _arith(args, out, "inv")


@dataclass
class BenchConfig:
    cartan: str
    rank: int
    field: str
    methods: tuple
    trials: int = 100
    seed: int = 0
    bits: int = 32
    fmt: str = "markdown"
    node_cap: int = DEFAULT_NODE_CAP


BENCH_HEADER = ("type", "rank", "field", "method", "operation", "trials", "avg_ring_ops",
                "avg_time_ms")


def run_bench(cfg: BenchConfig) -> list[tuple]:
    """Rows (type, rank, field, method, operation, trials, avg ops, avg ms).

    Every method sees the same random elements: they are drawn once in
    representation order and converted to each method's ordering outside
    the measured region.
    """
    if cfg.trials <= 0:
        return []
    rs = build_root_system(cfg.cartan, cfg.rank)
    ring = ring_from_spec(cfg.field, cfg.bits)
    rng = Random(cfg.seed)
    rep = representation_order(rs)
    inputs = [(random_element(rep, ring, rng), random_element(rep, ring, rng))
              for _ in range(cfg.trials)]
    rows = []
    for name in cfg.methods:
        base = (rs.cartan, rs.rank, cfg.field, name)
        try:
            M = get_method(rs, name, cfg.node_cap).prepare(ring)
        except MemoryGuard:
            rows += [base + (op, cfg.trials, "MEM", "MEM") for op in ("multiply", "invert")]
            continue
        except UnsupportedCharacteristic:
            rows += [base + (op, cfg.trials, "n/a", "n/a") for op in ("multiply", "invert")]
            continue
        pairs = [(M.element(ring, x), M.element(ring, y)) for x, y in inputs]
        for op in ("multiply", "invert"):
            ops = 0
            elapsed = 0.0
            for x, y in pairs:
                if op == "multiply":
                    action = lambda R, x=x, y=y: M.multiply(R, x, y)
                else:
                    action = lambda R, x=x: M.invert(R, x)
                t0 = time.perf_counter()
                counts, _ = count_ops(ring, action)
                elapsed += time.perf_counter() - t0
                ops += counts.total()
            rows.append(base + (op, cfg.trials, f"{ops / cfg.trials:.1f}",
                                f"{1000 * elapsed / cfg.trials:.3f}"))
    return rows


def cmd_bench(args, out) -> int:
    rs = _root_system(args)
    _ring(args)
    methods = _methods(args)
    bad = [m for m in methods if m not in METHODS]
    if bad:
        raise UsageError(f"unknown methods {bad}; choose from {', '.join(METHODS)}")
    cfg = BenchConfig(rs.cartan, rs.rank, args.field, tuple(methods),
                      100 if args.trials is None else args.trials, args.seed, args.bits,
                      args.format, args.node_cap)
    print(render(BENCH_HEADER, run_bench(cfg), args.format), file=out)
    return EXIT_OK


HALLDEG_HEADER = ("type", "rank", "strategy", "ordering", "max_degree", "avg_degree")
ENTRY_HEADER = ("type", "rank", "strategy", "r", "s", "nodes", "total_degree")


def halldeg_rows(cartan: str, ranks: Sequence[int], strategies: Sequence[str],
                 cap: int = DEFAULT_NODE_CAP, entries: bool = False) -> list[tuple]:
    rows = []
    for rank in ranks:
        rs = build_root_system(cartan, rank)
        if rs.N < 2:
            continue
        for strategy in strategies:
            pres = presentation(rs, default_ordering(rs, strategy))
            try:
                tables = build_symbolic_tables(pres, strategy, cap=cap)
            except MemoryGuard:
                rows.append((cartan, rank, strategy, pres.ordering.name, "MEM", "MEM"))
                continue
            if entries:
                rows += table_report(tables)
            else:
                st = hall_degree_stats(tables)
                rows.append((cartan, rank, strategy, pres.ordering.name, st.max_degree,
                             str(st.avg_degree)))
    return rows


def cmd_halldeg(args, out) -> int:
    rs = _root_system(args)
    strategies = _methods(args)
    if not strategies or any(s not in ("cfl", "cfo") for s in strategies):
        raise UsageError("--method must list cfl and/or cfo")
    top = args.max_rank or rs.rank
    rows = halldeg_rows(rs.cartan, range(rs.rank, top + 1), strategies, args.node_cap, args.entries)
    header = ENTRY_HEADER if args.entries else HALLDEG_HEADER
    print(render(header, rows, args.format), file=out)
    if any("MEM" in r for r in rows):
        return EXIT_RESOURCE
    return EXIT_OK


def selftest_suites(cartans: Sequence[str], ranks: Sequence[int], rings: Sequence[Ring],
                    trials: int, seed: int = 0) -> list[CheckResult]:
    results = []
    for ring in rings:
        for cartan in cartans:
            for rank in ranks:
                rs = build_root_system(cartan, rank)
                results.append(presentation_validation(rs, ring, trials, seed))
                results.append(agreement(rs, ring, trials, seed))
                results.append(word_agreement(rs, ring, trials, seed))
                results.append(oracle(rs, ring, trials, seed))
                for m in supported_methods(rs, ring):
                    results.append(axioms(rs, ring, m, max(1, trials // 2), seed))
    return results


def cmd_selftest(args, out) -> int:
    if args.mutate_table:
        rs = build_root_system(args.type.upper(), max(args.rank, 3))
        res = presentation_validation(rs, _ring(args), args.trials or 20, args.seed, mutate=True)
        print(res.summary(), file=out)
        if res.ok:
            print("mutation was not detected", file=out)
        return EXIT_FAIL
    if args.quick:
        ranks, trials, rings = (2, 3), args.trials or 10, [ring_from_spec("fp:17")]
    else:
        ranks, trials = (2, 3, 4, 5), args.trials or 50
        rings = [ring_from_spec("fp:17"), ring_from_spec("q", args.bits)]
    results = selftest_suites("ABCD", ranks, rings, trials, args.seed)
    for res in results:
        print(res.summary(), file=out)
    failed = sum(not r.ok for r in results)
    print(f"{len(results) - failed}/{len(results)} suites passed", file=out)
    return EXIT_FAIL if failed else EXIT_OK


COMMANDS = {"collect": cmd_collect, "mul": cmd_mul, "inv": cmd_inv, "bench": cmd_bench,
            "halldeg": cmd_halldeg, "selftest": cmd_selftest}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MemoryGuard, BudgetExceeded) as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


def main_entry():
    sys.exit(main())
