import io
import subprocess
import sys
from pathlib import Path

import pytest

import mcfl
from mcfl.cli import main
from mcfl.expr import parse
from mcfl.grammar import format_grammar, parse_grammar

FIXTURES = Path(mcfl.__file__).parent / "fixtures"


def run(*argv, stdin=None):
    out, err = io.StringIO(), io.StringIO()
    old = sys.stdin
    if stdin is not None:
        sys.stdin = io.StringIO(stdin)
    try:
        code = main(list(argv), out, err)
    finally:
        sys.stdin = old
    return code, out.getvalue(), err.getvalue()


def test_decide_from_w():
    assert run("decide", "mu x.(x^w + a + b + eps)", "--from-w")[:2] == (0, "WellOrdered\n")


def test_decide_not_well_ordered_prints_the_pair():
    code, out, _ = run("decide", "mu x.((x >< x)^w + a + b + eps)")
    assert code == 1
    verdict, where = out.splitlines()
    assert verdict == "NotWellOrdered"
    assert where.endswith(": x >< x")


def test_decide_empty_and_strict():
    assert run("decide", "a.(mu x.x)")[:2] == (2, "EmptyLanguage\n")
    assert run("decide", "a.(mu x.x)", "--strict")[:2] == (0, "WellOrdered\n")


def test_decide_lines_format():
    code, out, _ = run("decide", "(a >< b)^w", "--format", "lines")
    assert code == 1
    assert out.splitlines() == ["NotWellOrdered", "body\ta >< b"]


def test_g2e_example2():
    code, out, _ = run("g2e", "fixtures/example2.mcfg")
    assert code == 0
    lines = [line.strip() for line in out.splitlines()]
    assert "X_S = a + b + eps + X_I" in lines
    assert "X_I = (X_S >< X_S)^w" in lines
    assert lines.index("X_I = (X_S >< X_S)^w") < lines.index("mu X_S.(a + b + eps + (X_S >< X_S)^w)")


def test_g2e_lines_format_and_stdin():
    text = (FIXTURES / "example1.mcfg").read_text()
    code, out, _ = run("g2e", "-", "--format", "lines", stdin=text)
    assert code == 0
    assert out.splitlines() == [
        "X_S = a + b + eps + X_I",
        "X_I = (X_S >< eps)^w",
        "mu X_S.(a + b + eps + (X_S >< eps)^w)",
    ]


def test_eval_star_of_empty_pairs():
    assert run("eval", "((mu x.x >< mu x.x)^*)^w", "--mu", "2")[:2] == (0, "eps\n")


def test_eval_is_length_lexicographic():
    code, out, _ = run("eval", "mu x.(a.x + b + eps)", "--mu", "4")
    lines = out.splitlines()
    assert code == 0
    assert lines == sorted(lines, key=lambda s: (len(s), s))
    assert lines[:3] == ["a", "b", "aa"]


def test_e2g_writes_a_grammar():
    code, out, _ = run("e2g", "mu x.(a.x + b)")
    assert code == 0
    g = parse_grammar(out)
    assert g.terminals == ("a", "b")
    code, out, _ = run("e2g", "a >< b")
    assert out.startswith("// pairs")


def test_rank_and_symbols():
    assert run("rank", "(a^w)^w", "--format", "lines")[1] == "2\n"
    assert run("symbols", "mu x.(a.x + eps)")[1] == "a\n"
    assert run("symbols", "x.b", "--var", "x")[1] == "b\nx\n"


def test_parse_command():
    assert run("parse", "mu x.(x^w + a)")[1] == "mu x.((x >< eps)^w + a)\n"
    assert run("parse", "a^w", "--mode", "w")[1] == "a^w\n"
    code, out, _ = run("parse", str(FIXTURES / "example3.mcfg"), "--grammar", "-f")
    assert code == 0
    assert parse_grammar(out) == parse_grammar((FIXTURES / "example3.mcfg").read_text())


def test_usage_errors():
    assert run()[0] == 64
    assert run("nonsense")[0] == 64
    assert run("eval", "a", "--mu", "x")[0] == 64
    assert run("eval", "a", "--mu", "-1")[0] == 64
    assert run("g2e", "no/such/file.mcfg")[0] == 64


def test_data_errors():
    code, _, err = run("eval", "a + ")
    assert code == 65 and "position" in err
    assert run("decide", "a >< b")[0] == 65
    bad = "nonterminals: S\nterminals: S\nstart: S\nS -> S\n"
    code, _, err = run("g2e", "-", stdin=bad)
    assert code == 65 and "both a terminal and a nonterminal" in err


@pytest.mark.parametrize("name", ["example1.mcfg", "example2.mcfg", "example3.mcfg"])
def test_fixture_files_are_stable(name):
    g = parse_grammar((FIXTURES / name).read_text())
    assert parse_grammar(format_grammar(g)) == g


def test_repeated_runs_are_byte_identical():
    argv = [sys.executable, "-m", "mcfl", "g2e", "fixtures/example3.mcfg"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second
    e = parse(first.decode().splitlines()[-1].strip())
    assert e.sort == "T"
