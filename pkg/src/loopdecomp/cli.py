"""Command-line front end.

Exit codes: 0 success, 1 verification failure or internal inconsistency,
2 undetermined case, 3 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .catalog import case_record, decompose, parse_group
from .errors import (
    ExcludedCaseError,
    LoopDecompError,
    NotApplicableError,
    NotQuasiRegularError,
    OutOfRangeError,
    ParameterError,
    ParseError,
    PrimeError,
    UndeterminedError,
    UnsupportedError,
    ValidationError,
)
from .exponent import exponent_report
from .fibre import rational_homotopy_degrees, solve
from .homotopy import pi_B, pi_sphere
from .space import render, to_dict

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_UNDETERMINED = 2
EXIT_INVALID = 3

INVALID_INPUT = (
    ParseError, ParameterError, PrimeError, NotQuasiRegularError, ValidationError,
    UnsupportedError, OutOfRangeError, NotApplicableError, ExcludedCaseError,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def parse_params(text: str | None) -> dict:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ParameterError(f"expected name=value, got {item!r}")
        try:
            out[key.strip()] = int(value)
        except ValueError:
            raise ParameterError(f"parameter {key.strip()} must be an integer, got {value!r}") from None
    return out


def _emit(args, data: dict, plain: str, markdown: str | None = None) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2, ensure_ascii=True))
    elif args.format == "markdown":
        print(markdown if markdown is not None else plain)
    else:
        print(plain)


def _expr_json(expr) -> dict:
    return {"expression": render(expr, omega="Omega"), "factors": to_dict(expr)}


def _footnotes(citations) -> str:
    return "\n".join(f"[{i}] {c}" for i, c in enumerate(citations, start=1))


# commands -------------------------------------------------------------------

def cmd_decompose_group(args) -> int:
    g = parse_group(args.group)
    d = decompose(g, args.prime)
    text = render(d.expr)
    data = {"group": str(g), "prime": args.prime, **_expr_json(d.expr), "citations": list(d.citations)}
    plain = text + ("\n" + _footnotes(d.citations) if d.citations else "")
    _emit(args, data, plain, f"**{g}** at p={args.prime}: {text}")
    return EXIT_OK


def _case(args):
    return case_record(args.case, parse_params(args.params), args.prime)


def cmd_loop_space(args) -> int:
    c = _case(args)
    result = solve(c)
    if result.status == "undetermined":
        data = result.to_dict()
        _emit(args, data, f"{c} at p={c.prime}: undetermined\n{result.note}")
        return EXIT_UNDETERMINED
    expr = result.expression
    rep = exponent_report(c)
    degrees = rational_homotopy_degrees(c)
    head = f"{render(expr)} | {rep.interval.describe()}"
    lines = [
        head,
        "rational degrees: " + ", ".join(map(str, degrees)),
        "consumed degrees: " + ", ".join(map(str, result.consumed)),
        _footnotes(result.citations),
    ]
    data = {
        **result.to_dict(),
        **_expr_json(expr),
        "exponent": {"lo": rep.interval.lo, "hi": rep.interval.hi, "exact": rep.exact},
        "rational_degrees": list(degrees),
    }
    _emit(args, data, "\n".join(lines), f"| {c} | {c.prime} | {render(expr)} | {rep.interval.describe()} |")
    return EXIT_OK


def cmd_exponent(args) -> int:
    rep = exponent_report(_case(args))
    _emit(args, rep.to_dict(), f"{rep.case} at p={rep.prime}: {rep.interval.describe()} {rep.interval}")
    return EXIT_OK


def cmd_rational(args) -> int:
    c = _case(args)
    degrees = rational_homotopy_degrees(c)
    _emit(args, {"case": str(c), "prime": c.prime, "degrees": list(degrees)},
          ", ".join(map(str, degrees)))
    return EXIT_OK


def cmd_pi(args) -> int:
    kind = args.kind.upper()
    if kind == "S":
        g, space = pi_sphere(args.m, args.t, args.prime), f"S^{2 * args.m - 1}"
    elif kind == "B":
        g = pi_B(args.m, args.t, args.prime)
        space = f"B({2 * args.m - 1},{2 * args.m + 2 * args.prime - 3})"
    else:
        raise ValidationError(f"kind must be S or B, got {args.kind!r}")
    k = 2 * args.m - 1 + args.t
    _emit(args, {"space": space, "degree": k, "prime": args.prime, "group": str(g)},
          f"π_{k}({space})_({args.prime}) = {g}")
    return EXIT_OK


def cmd_tables(args) -> int:
    from . import tables

    if args.which == "exceptional":
        rows = tables.exceptional_rows()
        if args.format == "json":
            sys.stdout.write(tables.exceptional_json(rows))
        elif args.format == "plain":
            sys.stdout.write(tables.plain(rows))
        else:
            sys.stdout.write(tables.exceptional_markdown(rows))
        return EXIT_OK
    points = tables.classical_sweep(args.max_n)
    if args.format == "json":
        sys.stdout.write(tables.classical_json(points))
    elif args.format == "plain":
        sys.stdout.write(tables.plain(points))
    else:
        sys.stdout.write(tables.classical_markdown(points))
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import weyl

    if args.what == "fi-nonsplit":
        subs = weyl.fi_substitutions()
        ok = weyl.verify_FI_no_splitting()
        data = {"check": "fi-nonsplit", "ok": ok, "substitutions": [s.to_dict() for s in subs]}
        lines = [f"a={s.a} b={s.b}: {'SPLITS' if s.splits else 'no split'}  {s.result}" for s in subs]
        lines.append("PASS" if ok else "FAIL")
    else:
        p = args.prime
        checks = []
        for comp in weyl.COMPLEMENTS:
            for ch in weyl.appendix_table_checks(p, comp) + weyl.generator_checks(p, comp):
                checks.append({"complement": comp, **ch.to_dict()})
        oracle = [weyl.invariant_oracle(p, d) for d in weyl.DEGREES]
        ok = all(ch["ok"] for ch in checks) and all(o.ok for o in oracle)
        data = {"check": "appendix-e7", "prime": p, "ok": ok, "identities": checks,
                "oracle": [o.to_dict() for o in oracle]}
        lines = [f"[{ch['complement']}] {ch['name']}: {'ok' if ch['ok'] else 'FAIL ' + ch.get('residual', '')}"
                 for ch in checks]
        lines += [f"oracle degree {o.degree} ({o.target}): {'ok' if o.ok else 'FAIL'}" for o in oracle]
        lines.append("PASS" if ok else "FAIL")
    _emit(args, data, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAILED


# parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="loopdecomp", description="p-local loop space decompositions of symmetric spaces")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, prime_default=None, fmt_default="plain"):
        sp.add_argument("--prime", "-p", type=int, required=prime_default is None, default=prime_default)
        sp.add_argument("--format", choices=("plain", "json", "markdown"), default=fmt_default)

    sp = sub.add_parser("decompose-group", help="quasi-p-regular decomposition of a Lie group")
    sp.add_argument("group")
    common(sp)
    sp.set_defaults(func=cmd_decompose_group)

    for name, func, text in (
        ("loop-space", cmd_loop_space, "decomposition of Ω(G/H) with exponent and audits"),
        ("exponent", cmd_exponent, "homotopy exponent interval of G/H"),
        ("rational", cmd_rational, "rational homotopy degrees of G/H"),
    ):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("case")
        sp.add_argument("--params", help="comma separated, e.g. n=5,m=2")
        common(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("pi", help="p-local homotopy group of S^{2m-1} or B(2m-1,2m+2p-3)")
    sp.add_argument("kind", help="S or B")
    sp.add_argument("m", type=int)
    sp.add_argument("t", type=int, help="offset above the bottom cell")
    common(sp)
    sp.set_defaults(func=cmd_pi)

    sp = sub.add_parser("tables", help="emit the classical or exceptional table")
    sp.add_argument("which", choices=("classical", "exceptional"))
    sp.add_argument("--max-n", type=int, default=6)
    sp.add_argument("--format", choices=("plain", "json", "markdown"), default="markdown")
    sp.set_defaults(func=cmd_tables)

    sp = sub.add_parser("verify", help="run a built-in verification")
    sp.add_argument("what", choices=("appendix-e7", "fi-nonsplit"))
    common(sp, prime_default=7, fmt_default="json")
    sp.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UndeterminedError as exc:
        print(f"undetermined: {exc}", file=sys.stderr)
        return EXIT_UNDETERMINED
    except INVALID_INPUT as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except LoopDecompError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
