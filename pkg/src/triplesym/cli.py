"""Command-line interface.

Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 search exhausted.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from pathlib import Path
from typing import Sequence

from . import golden
from .conic import DEFAULT_HEIGHT_BOUND, solve_conic
from .errors import HeightExhausted, PreconditionFailed, TripleSymError
from .magnus import FreeWord, expand, random_depth3_word, random_word
from .massey import CochainFunctional, triple_massey_pairing
from .ok_ring import QuadField, class_numbers, fundamental_unit
from .redei import build_redei, integrality_witnesses, triple_report
from .residue import (
    DYADIC,
    INF1,
    INF2,
    Place,
    dyadic_hilbert,
    hilbert_symbol,
    local_symbols,
    parse_ideal,
    product_formula_check,
    quad_symbol,
)
from .search import load_cache, records_csv, run_search, write_cache

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_EXHAUSTED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _field(args) -> QuadField:
    try:
        return QuadField(args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _emit(args, payload: dict, rows: Sequence[Sequence] | None = None, header: Sequence[str] | None = None):
    """Print payload as JSON, or rows as CSV / an aligned table."""
    fmt = args.format
    if rows is None:
        header = ("key", "value")
        rows = [(k, v if not isinstance(v, (dict, list)) else json.dumps(v, ensure_ascii=False)) for k, v in payload.items()]
    if fmt == "json":
        text = json.dumps(payload, indent=2, ensure_ascii=False)
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue().rstrip("\n")
    else:
        cells = [list(map(str, header))] + [[str(c) for c in r] for r in rows]
        widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
        text = "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells)
    if args.out and args.command != "search":
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    print(text)


# -- commands ----------------------------------------------------------------


def cmd_unit(args) -> int:
    F = _field(args)
    u = fundamental_unit(F)
    _emit(args, {"p": F.p, "unit": str(u.fundamental_unit), "unit_wbasis": u.fundamental_unit.to_text(), "norm": u.unit_norm})
    return EXIT_OK


def cmd_classno(args) -> int:
    F = _field(args)
    c = class_numbers(F)
    _emit(args, {"p": F.p, "h": c.h, "h_plus": c.h_plus})
    return EXIT_OK


def cmd_symbol(args) -> int:
    F = _field(args)
    a = F.parse(args.a)
    P = parse_ideal(args.ideal, F)
    _emit(args, {"a": str(a), "ideal": P.to_text(), "symbol": quad_symbol(a, P)})
    return EXIT_OK


def _place(text: str, F: QuadField) -> Place:
    named = {"inf1": INF1, "inf2": INF2, "dyadic": DYADIC}
    if text in named:
        return named[text]
    return Place.finite(parse_ideal(text, F))


def cmd_hilbert(args) -> int:
    F = _field(args)
    a, b = F.parse(args.a), F.parse(args.b)
    if args.place:
        place = _place(args.place, F)
        value = dyadic_hilbert(a, b) if place == DYADIC else hilbert_symbol(a, b, place)
        _emit(args, {"a": str(a), "b": str(b), "place": str(place), "symbol": value})
        return EXIT_OK
    symbols = local_symbols(a, b)
    ok = product_formula_check(a, b)
    payload = {"a": str(a), "b": str(b), "symbols": symbols, "product_formula": ok}
    rows = [(k, v) for k, v in symbols.items()] + [("product", "ok" if ok else "FAIL")]
    _emit(args, payload, rows, ("place", "symbol"))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_conic(args) -> int:
    F = _field(args)
    pi1, pi2 = F.parse(args.pi1), F.parse(args.pi2)
    sol = solve_conic(pi1, pi2, args.height_bound)
    _emit(args, {"x": str(sol.x), "y": str(sol.y), "z": str(sol.z), "solution": sol.to_json()})
    return EXIT_OK


def cmd_redei(args) -> int:
    F = _field(args)
    p1, p2 = parse_ideal(args.p1, F), parse_ideal(args.p2, F)
    data = build_redei(p1, p2, args.height_bound)
    report = integrality_witnesses(data)
    payload = {
        "pi1": str(data.pi1),
        "pi2": str(data.pi2),
        "alpha1": data.alpha1_text(),
        "tower": list(data.tower),
        "witnesses": report.as_dict(),
        "data": data.to_json(),
    }
    _emit(args, payload)
    return EXIT_OK


def cmd_triple(args) -> int:
    F = _field(args)
    ideals = [parse_ideal(t, F) for t in (args.p1, args.p2, args.p3)]
    res = triple_report(*ideals, height_bound=args.height_bound)
    payload = res.to_json()
    if args.format == "json":
        _emit(args, payload)
    else:
        _emit(args, {"p1": ideals[0].to_text(), "p2": ideals[1].to_text(), "p3": ideals[2].to_text(),
                     "symbol": res.symbol, "s": payload["s"], "u": payload["u"],
                     "x": str(res.solution.x), "y": str(res.solution.y), "z": str(res.solution.z)})
    return EXIT_OK


def _word(args, depth3: bool = False) -> FreeWord:
    if args.word is not None:
        return FreeWord.parse(args.word, args.gens)
    rng = random.Random(args.seed)
    return random_depth3_word(rng, args.gens) if depth3 else random_word(rng, args.gens, 8)


def cmd_magnus(args) -> int:
    w = _word(args)
    series = expand(w, args.truncation)
    payload = {"word": w.to_text(), "truncation": args.truncation, "coefficients": series.lines()}
    rows = [(line.split(":")[0], 1) for line in series.lines()]
    _emit(args, payload, rows, ("I", "bit"))
    return EXIT_OK


def cmd_massey(args) -> int:
    if args.gens < 3:
        raise UsageError("massey needs at least three generators")
    w = _word(args, depth3=True)
    chis = [CochainFunctional.dual(i) for i in (1, 2, 3)]
    value = triple_massey_pairing(*chis, w, D=max(args.truncation, 4))
    _emit(args, {"word": w.to_text(), "pairing": value})
    return EXIT_OK


def cmd_search(args) -> int:
    out = Path(args.out) if args.out else None
    existing = load_cache(out) if out else []
    records = run_search(args.p, args.norm_bound, args.jobs, args.height_bound, existing)
    if out:
        write_cache(out, records, {"p": args.p, "norm_bound": args.norm_bound})
    if args.format == "csv":
        sys.stdout.write(records_csv(records))
    else:
        payload = {"p": args.p, "norm_bound": args.norm_bound, "records": [r.to_json() for r in records]}
        rows = [r.csv_row()[1:] for r in records]
        _emit(args, payload, rows, ("Np1", "pi1", "Np2", "pi2", "Np3", "pi3", "symbol"))
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    if args.p_given:
        _field(args)
    results = golden.golden_suite(args.p if args.p_given else None)
    ok = all(r.ok for r in results)
    payload = {"checks": [{"name": r.name, "ok": r.ok, "detail": r.detail} for r in results], "all_passed": ok}
    rows = [(r.name, "pass" if r.ok else "FAIL", r.detail) for r in results]
    _emit(args, payload, rows, ("check", "result", "detail"))
    return EXIT_OK if ok else EXIT_FAIL


# -- parser ------------------------------------------------------------------


class _PAction(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        namespace.p_given = True


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=5, action=_PAction, help="prime p = 1 mod 4 defining Q(sqrt p)")
    common.add_argument("--norm-bound", type=int, default=1000)
    common.add_argument("--truncation", type=int, default=4, help="Magnus truncation degree D")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="output file (search: CSV cache path)")
    common.add_argument("--format", choices=("json", "csv", "table"), default="table")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--height-bound", type=int, default=DEFAULT_HEIGHT_BOUND)
    common.set_defaults(p_given=False)

    parser = argparse.ArgumentParser(prog="triplesym", description="Triple quadratic residue symbols over Q(sqrt p).")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, *positionals):
        sp = sub.add_parser(name, parents=[common], help=help_)
        for pos, kw in positionals:
            sp.add_argument(pos, **kw)
        sp.set_defaults(func=func)

    word = ("word", {"nargs": "?", "help": "word such as 'x1^3 x2^-1 x1'; random from --seed if omitted"})
    add("unit", cmd_unit, "fundamental unit")
    add("classno", cmd_classno, "class numbers h and h+")
    add("symbol", cmd_symbol, "quadratic residue symbol (a/P)", ("a", {}), ("ideal", {}))
    add("hilbert", cmd_hilbert, "Hilbert symbols and the product formula", ("a", {}), ("b", {}),
        ("--place", {"help": "inf1, inf2, dyadic or a prime ideal"}))
    add("conic", cmd_conic, "normalized solution of x^2 = pi1 y^2 + pi2 z^2", ("pi1", {}), ("pi2", {}))
    add("redei", cmd_redei, "D8 extension data and witnesses", ("p1", {}), ("p2", {}))
    add("triple", cmd_triple, "triple symbol [p1, p2, p3]", ("p1", {}), ("p2", {}), ("p3", {}))
    add("magnus", cmd_magnus, "mod-2 Magnus expansion", word, ("--gens", {"type": int, "default": 2}))
    add("massey", cmd_massey, "triple Massey pairing on a depth-3 word", word, ("--gens", {"type": int, "default": 3}))
    add("search", cmd_search, "admissible-triple search with cache")
    add("verify-paper", cmd_verify_paper, "run the worked-example checks")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.jobs < 1 or args.truncation < 2 or args.norm_bound < 1:
            raise UsageError("--jobs and --norm-bound must be positive, --truncation at least 2")
        return args.func(args)
    except HeightExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except (UsageError, PreconditionFailed, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TripleSymError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
