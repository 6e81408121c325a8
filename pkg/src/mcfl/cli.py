"""Command-line interface: ``mcfl COMMAND INPUT [options]``.

Exit codes: 0 success or WellOrdered, 1 NotWellOrdered, 2 EmptyLanguage,
64 usage error, 65 parse or validation error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import words as W
from .compile import PairGrammar, compile
from .decide import Verdict, decide, symbols
from .errors import McflError
from .evaluate import Bounds, eval_expr, gaussian_eliminate
from .expr import embed_w_to_s, parse, render
from .grammar import build_equation_system, format_grammar, parse_grammar

EX_USAGE = 64
EX_DATAERR = 65
FIXTURES = Path(__file__).parent / "fixtures"
_VERDICT_CODES = {Verdict.WELL_ORDERED: 0, Verdict.NOT_WELL_ORDERED: 1, Verdict.EMPTY_LANGUAGE: 2}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_text(arg: str, is_file: bool) -> str:
    if arg == "-":
        return sys.stdin.read()
    if not is_file:
        return arg
    path = Path(arg)
    if not path.exists() and (FIXTURES / path.name).exists():
        path = FIXTURES / path.name
    try:
        return path.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {arg}: {exc.strerror}") from None


def _expr(args, mode=None):
    text = _read_text(args.input, args.file)
    e = parse(text, mode=mode or args.mode)
    return e


def _bounds(args) -> Bounds:
    try:
        return Bounds(args.mu, args.star, args.omega_prefix, args.omega_period, args.max_term)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_parse(args, out):
    text = _read_text(args.input, args.file)
    if args.grammar:
        out.append(format_grammar(parse_grammar(text)).rstrip("\n"))
    else:
        out.append(render(parse(text, mode=args.mode)))
    return 0


def cmd_decide(args, out):
    e = _expr(args, "w" if args.from_w else None)
    if args.from_w:
        e = embed_w_to_s(e)
    d = decide(e, strict=args.strict)
    if args.format == "lines":
        out.append(str(d.verdict))
        if d.witness is not None:
            out.append("/".join(d.path) + "\t" + render(d.witness))
    else:
        out.append(d.describe())
    return _VERDICT_CODES[d.verdict]


def cmd_g2e(args, out):
    g = parse_grammar(_read_text(args.input, True))
    system = build_equation_system(g)
    closed = gaussian_eliminate(system, system.start)
    if args.format == "lines":
        out.extend(system.lines())
        out.append(render(closed))
    else:
        out.append("equations:")
        out.extend("  " + line for line in system.lines())
        out.append(f"{system.start}:")
        out.append("  " + render(closed))
    return 0


def cmd_e2g(args, out):
    result = compile(_expr(args))
    if isinstance(result, PairGrammar):
        out.append(f"// pairs (u, v) are the words u {result.separator} v")
        result = result.grammar
    out.append(format_grammar(result).rstrip("\n"))
    return 0


def cmd_eval(args, out):
    lang = eval_expr(_expr(args), bounds=_bounds(args))
    out.extend(lang.lines())
    return 0


def cmd_rank(args, out):
    w = W.parse_word(_read_text(args.input, args.file))
    if args.format == "lines":
        out.append(str(W.rank_bound(w)))
    else:
        out.append(f"{w.text}\trank<={W.rank_bound(w)}\twell-ordered={W.is_well_ordered(w)}")
    return 0


def cmd_symbols(args, out):
    e = parse(_read_text(args.input, args.file), mode=args.mode, variables=args.var)
    out.extend(sorted(symbols(e)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mcfl", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, func, helptext, input_help="expression text, or - for stdin"):
        c = sub.add_parser(name, help=helptext, description=helptext)
        c.set_defaults(func=func)
        c.add_argument("input", help=input_help)
        c.add_argument("--format", choices=("text", "lines"), default="text",
                       help="text for people, lines for one bare item per line")
        if name != "g2e":
            c.add_argument("-f", "--file", action="store_true",
                           help="read INPUT as a file path")
        return c

    def modes(c):
        c.add_argument("--mode", choices=("compat", "strict", "w"), default="compat",
                       help="how ^w applies to word expressions (default compat)")

    c = command("parse", cmd_parse, "parse and print an expression or grammar")
    modes(c)
    c.add_argument("--grammar", action="store_true", help="INPUT is a grammar")

    c = command("decide", cmd_decide, "decide whether an expression denotes well-ordered words only")
    modes(c)
    c.add_argument("--from-w", action="store_true",
                   help="read the one-sorted fragment and embed t^w as (t >< eps)^w")
    c.add_argument("--strict", action="store_true",
                   help="report the empty language as WellOrdered")

    command("g2e", cmd_g2e, "grammar to equation system and closed expression",
            "grammar file (names of bundled fixtures also resolve), or - for stdin")

    c = command("e2g", cmd_e2g, "compile a closed expression into a grammar")
    modes(c)

    c = command("eval", cmd_eval, "bounded enumeration of an expression's language")
    modes(c)
    c.add_argument("--mu", type=int, default=4, help="weight budget (default 4)")
    c.add_argument("--star", type=int, default=4, help="pair factors per star word (default 4)")
    c.add_argument("--omega-prefix", type=int, default=4,
                   help="pair factors before the period (default 4)")
    c.add_argument("--omega-period", type=int, default=4,
                   help="pair factors in the period (default 4)")
    c.add_argument("--max-term", type=int, default=60, help="node cap per term (default 60)")

    command("rank", cmd_rank, "rank bound of a word term such as 'a (b)^w'", "word term text")

    c = command("symbols", cmd_symbols, "symbols of an expression")
    modes(c)
    c.add_argument("--var", action="append", default=[], help="read NAME as a free variable")
    return p


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        out = []
        code = args.func(args, out)
    except UsageError as exc:
        print(f"mcfl: usage error: {exc}", file=stderr)
        return EX_USAGE
    except McflError as exc:
        print(f"mcfl: {type(exc).__name__}: {exc}", file=stderr)
        return EX_DATAERR
    for line in out:
        print(line, file=stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
