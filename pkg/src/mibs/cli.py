"""Command-line front end.

Every number written to stdout is an exact rational string. Orders above the
ceiling (default 6, raised or lowered with ``MIBS_MAX_ORDER``) are refused.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 parse error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from collections.abc import Sequence
from fractions import Fraction

from mibs import verify
from mibs.characters import Character, compose_characters, exact_solution_character, substitute_characters
from mibs.core import enumerate_forests, enumerate_populated
from mibs.rk import BUILTIN, ButcherTableau
from mibs.trees import enumerate_trees

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_PARSE = 0, 1, 2, 3
DEFAULT_CEILING = 6

log = logging.getLogger("mibs")


class UsageError(Exception):
    pass


class ParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2
        raise UsageError(message)


def ceiling() -> int:
    raw = os.environ.get("MIBS_MAX_ORDER")
    if raw is None:
        return DEFAULT_CEILING
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"MIBS_MAX_ORDER must be an integer, got {raw!r}") from None
    if value < 1:
        raise UsageError("MIBS_MAX_ORDER must be at least 1")
    return value


def checked_order(n: int) -> int:
    if n < 1:
        raise UsageError(f"order must be at least 1, got {n}")
    top = ceiling()
    if n > top:
        raise UsageError(f"order {n} exceeds the ceiling {top}; set MIBS_MAX_ORDER to raise it")
    return n


def read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc


def read_character(path: str) -> Character:
    try:
        return Character.from_json(read_json(path))
    except (ValueError, AttributeError, ZeroDivisionError) as exc:
        raise ParseError(f"{path}: {exc}") from exc


def character_out(ch: Character, with_float: bool) -> dict:
    data = ch.to_json()
    if with_float:
        for item in data["values"]:
            item["float"] = float(Fraction(item["coeff"]))
    return data


def emit(data) -> None:
    json.dump(data, sys.stdout, indent=2)
    sys.stdout.write("\n")


# ---------------------------------------------------------------------------
# commands


def cmd_enumerate(args) -> int:
    n = checked_order(args.order)
    if args.kind == "indices":
        items = enumerate_populated(n)
        text, js = (lambda x: x.text()), (lambda x: x.to_json())
    elif args.kind == "forests":
        items = enumerate_forests(n)
        text, js = (lambda x: x.text()), (lambda x: x.to_json())
    else:
        items = enumerate_trees(n)
        text, js = (lambda x: x.text()), (lambda x: x.text())
    if args.format == "json":
        emit({"order": n, "kind": args.kind, "count": len(items), "items": [js(x) for x in items]})
    else:
        for x in items:
            print(text(x))
        print(f"# order {n}: {len(items)} {args.kind}", file=sys.stderr)
    return EXIT_OK


def cmd_exact(args) -> int:
    emit(character_out(exact_solution_character(checked_order(args.order)), args.float))
    return EXIT_OK


def _binary(args, law, required: int, what: str) -> int:
    first = read_character(args.first)
    second = read_character(args.second)
    if first.empty != required:
        raise UsageError(f"{what} needs the first character to have empty value {required}, got {first.empty}")
    checked_order(min(first.order, second.order))
    emit(character_out(law(first, second), args.float))
    return EXIT_OK


def cmd_compose(args) -> int:
    return _binary(args, compose_characters, 1, "compose")


def cmd_substitute(args) -> int:
    return _binary(args, substitute_characters, 0, "substitute")


def load_tableau(source: str) -> ButcherTableau:
    if source in BUILTIN:
        return BUILTIN[source]
    try:
        return ButcherTableau.from_json(read_json(source))
    except (ValueError, AttributeError, ZeroDivisionError) as exc:
        raise ParseError(f"{source}: {exc}") from exc


def cmd_rk(args) -> int:
    n = checked_order(args.order)
    tab = load_tableau(args.tableau)
    ch = tab.character(n)
    emit({
        "tableau": tab.to_json(),
        "character": character_out(ch, args.float),
        "order_report": ch.agrees_through(exact_solution_character(n)),
    })
    return EXIT_OK


def cmd_verify(args) -> int:
    n = checked_order(args.max_order)
    report = verify.run(args.suite, n, seed=args.seed)
    emit(report.to_json())
    for r in report.results:
        if not r.passed:
            log.error("FAIL %s / %s: %s", r.suite, r.name, r.detail)
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_stats(args) -> int:
    n = checked_order(args.max_order)
    rows = []
    for k in range(1, n + 1):
        trees, indices = len(enumerate_trees(k)), len(enumerate_populated(k))
        rows.append({"order": k, "trees": trees, "indices": indices, "ratio": str(Fraction(trees, indices))})
    if args.format == "json":
        emit(rows)
        return EXIT_OK
    header = f"{'order':>5} {'trees':>7} {'indices':>7} {'ratio':>9}" + ("   decimal" if args.float else "")
    print(header)
    for r in rows:
        line = f"{r['order']:>5} {r['trees']:>7} {r['indices']:>7} {r['ratio']:>9}"
        if args.float:
            line += f"   {float(Fraction(r['ratio'])):.4f}"
        print(line)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mibs", description="Exact multi-index B-series toolkit.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("enumerate", help="list the basis of one order")
    e.add_argument("--order", type=int, required=True)
    e.add_argument("--kind", choices=("indices", "forests", "trees"), default="indices")
    e.add_argument("--format", choices=("text", "json"), default="text")
    e.set_defaults(func=cmd_enumerate)

    x = sub.add_parser("exact", help="character of the exact flow")
    x.add_argument("--order", type=int, default=DEFAULT_CEILING)
    x.add_argument("--float", action="store_true", help="add a decimal column")
    x.set_defaults(func=cmd_exact)

    for name, func, text in (
        ("compose", cmd_compose, "run FIRST then SECOND; FIRST needs empty value 1"),
        ("substitute", cmd_substitute, "substitute FIRST into SECOND; FIRST needs empty value 0"),
    ):
        c = sub.add_parser(name, help=text, description=text)
        c.add_argument("first")
        c.add_argument("second")
        c.add_argument("--float", action="store_true")
        c.set_defaults(func=func)

    r = sub.add_parser("rk", help="character and order of a Runge-Kutta tableau")
    r.add_argument("--tableau", required=True, help=f"JSON file or one of {', '.join(BUILTIN)}")
    r.add_argument("--order", type=int, default=5)
    r.add_argument("--float", action="store_true")
    r.set_defaults(func=cmd_rk)

    v = sub.add_parser("verify", help="run property suites")
    v.add_argument("--suite", choices=verify.SUITES + ("all",), default="all")
    v.add_argument("--max-order", type=int, default=5)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("stats", help="per-order tree and multi-index counts")
    s.add_argument("--max-order", type=int, default=DEFAULT_CEILING)
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.add_argument("--float", action="store_true")
    s.set_defaults(func=cmd_stats)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(format="mibs: %(levelname)s: %(message)s", level=logging.WARNING)
    try:
        args = build_parser().parse_args(argv)
        if args.verbose:
            logging.getLogger().setLevel(logging.INFO)
        return args.func(args)
    except UsageError as exc:
        print(f"mibs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"mibs: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
