"""Command-line front end: ``intdiff <command> ...``.

Exit codes: 0 on success, 1 on a domain error (the input is well formed but
the operation is undefined for it), 2 on a usage error (bad flags, unreadable
files, malformed expressions).
"""

from __future__ import annotations

import argparse
import sys

from . import acceptance
from . import ideals as il
from .algebra import involution, to_text
from .automorphism import compose, invert, recognize
from .documents import (
    automorphism_from_doc, automorphism_to_doc, dumps, images_from_doc, load_json,
)
from .errors import AlgebraError, ParseError
from .module import apply, parse_polynomial
from .parser import parse_element
from .quotient import fredholm_index


class UsageError(Exception):
    pass


def _n(args) -> int:
    if args.n < 1:
        raise UsageError("-n must be at least 1")
    return args.n


def cmd_normalize(args) -> str:
    return to_text(parse_element(args.expr, _n(args)))


def cmd_mul(args) -> str:
    n = _n(args)
    result = parse_element(args.exprs[0], n)
    for text in args.exprs[1:]:
        result = result * parse_element(text, n)
    return to_text(result)


def cmd_star(args) -> str:
    return to_text(involution(parse_element(args.expr, _n(args))))


def cmd_apply(args) -> str:
    n = _n(args)
    return str(apply(parse_element(args.expr, n), parse_polynomial(args.poly, n)))


def cmd_index(args) -> str:
    return str(fredholm_index(parse_element(args.expr, 1)))


def cmd_recognize(args) -> str:
    return dumps(automorphism_to_doc(recognize(images_from_doc(load_json(args.images)))))


def cmd_invert_aut(args) -> str:
    return dumps(automorphism_to_doc(invert(automorphism_from_doc(load_json(args.aut)))))


def cmd_compose_aut(args) -> str:
    first = automorphism_from_doc(load_json(args.first))
    second = automorphism_from_doc(load_json(args.second))
    return dumps(automorphism_to_doc(compose(first, second)))


def cmd_ideals_enumerate(args) -> str:
    found = il.enumerate_ideals(_n(args))
    if args.count_only:
        return str(len(found))
    return "\n".join(str(a) for a in found)


def cmd_ideals_stabilizer(args) -> str:
    return il.stabilizer(il.parse_ideal(args.ideal, _n(args))).table()


def cmd_ideals_invariant(args) -> str:
    return "\n".join(str(a) for a in il.invariant_ideals(_n(args)))


def cmd_selftest(args) -> str:
    results = []
    for check in acceptance.CHECKS:
        result = acceptance.run_check(check)
        print(result.line(), flush=True)
        results.append(result)
    failed = [r.number for r in results if not r.passed]
    if failed:
        raise AlgebraError(f"checks failed: {', '.join(map(str, failed))}")
    return f"all {len(results)} checks passed"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="intdiff", description="Exact computations with polynomial integro-differential operators.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_n(p, default=1):
        p.add_argument("-n", type=int, default=default, help="number of variables (default %(default)s)")
        return p

    p = with_n(sub.add_parser("normalize", help="print the normal form of an expression"))
    p.add_argument("expr")
    p.set_defaults(func=cmd_normalize)

    p = with_n(sub.add_parser("mul", help="multiply expressions left to right"))
    p.add_argument("exprs", nargs="+", metavar="expr")
    p.set_defaults(func=cmd_mul)

    p = with_n(sub.add_parser("star", help="apply the involution D <-> I"))
    p.add_argument("expr")
    p.set_defaults(func=cmd_star)

    p = with_n(sub.add_parser("apply", help="act on a polynomial in divided powers x1^[k]"))
    p.add_argument("expr")
    p.add_argument("poly")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("index", help="Fredholm index of an operator in one variable")
    p.add_argument("expr")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("recognize", help="canonical form from a generator-images document")
    p.add_argument("--images", required=True, metavar="FILE")
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("invert-aut", help="invert an automorphism document")
    p.add_argument("--aut", required=True, metavar="FILE")
    p.set_defaults(func=cmd_invert_aut)

    p = sub.add_parser("compose-aut", help="compose two automorphism documents (A after B)")
    p.add_argument("first", metavar="A")
    p.add_argument("second", metavar="B")
    p.set_defaults(func=cmd_compose_aut)

    ideals = sub.add_parser("ideals", help="the lattice of ideals")
    isub = ideals.add_subparsers(dest="ideals_command", required=True, parser_class=_Parser)
    p = with_n(isub.add_parser("enumerate", help="list every ideal"))
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(func=cmd_ideals_enumerate)
    p = with_n(isub.add_parser("stabilizer", help="stabilizer of an ideal under slot permutations"))
    p.add_argument("ideal", help='e.g. "min{ {1}, {2,3} }"')
    p.set_defaults(func=cmd_ideals_stabilizer)
    p = with_n(isub.add_parser("invariant", help="ideals fixed by every automorphism"))
    p.set_defaults(func=cmd_ideals_invariant)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        output = args.func(args)
    except ParseError as exc:
        print(f"intdiff: {type(exc).__name__}: {exc.msg} (at byte {exc.offset})", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"intdiff: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"intdiff: error: {exc}", file=sys.stderr)
        return 2
    except AlgebraError as exc:
        print(f"intdiff: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print(output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
