from pathlib import Path

import pytest
from hypothesis import given, settings

import mcfl
from corpus import ROUNDTRIP, SCATTERED_UNIVERSE
from exprgen import closed_exprs
from mcfl.compile import PairGrammar, compile, substitute_language
from mcfl.errors import AlphabetClash, NotClosed
from mcfl.evaluate import Bounds, eval_expr, eval_system
from mcfl.expr import LetterE, Times, Var, parse
from mcfl.grammar import (
    build_equation_system, enumerate_finite_derivations, grammar, parse_grammar, validate,
)
from mcfl.words import Letter

FIXTURES = Path(mcfl.__file__).parent / "fixtures"


def via_grammar(g, bounds):
    system = build_equation_system(g)
    return eval_system(system, bounds)[system.start]


def finite_words(g, n=12):
    return {w.text for w in enumerate_finite_derivations(g, g.start, n)}


def test_letter():
    g = compile(parse("a"))
    assert len(g.productions) == 1 and g.productions[0].body == ("a",)
    assert g.accepting == () and g.open_accepting == ()
    assert finite_words(g) == {"a"}


def test_omega_of_a_pair():
    g = compile(parse("(a >< b)^w"))
    b = Bounds(9, 4, 4, 4, 40)
    lang = via_grammar(g, b)
    assert "a^wb^-w" in lang.lines()
    assert lang == eval_expr(parse("(a >< b)^w"), bounds=b)


def test_scattered_universe_matches_example2():
    ex2 = parse_grammar((FIXTURES / "example2.mcfg").read_text())
    g = compile(parse(SCATTERED_UNIVERSE))
    for mu in (2, 4, 6):
        b = Bounds(mu, mu, mu, mu, 40)
        assert via_grammar(g, b) == via_grammar(ex2, b)


def test_pair_sort_gives_a_pair_grammar():
    pg = compile(parse("(a >< b).(a >< eps)"))
    assert isinstance(pg, PairGrammar)
    sep = pg.separator
    words = finite_words(pg.grammar)
    assert words == {f"aa{sep}b"}


def test_pair_concatenation_shape():
    e = parse("((a + b) >< a).(b >< (a + eps))")
    pg = compile(e)
    got = set()
    for text in finite_words(pg.grammar, 20):
        u, v = text.split(pg.separator)
        got.add((u, v))
    expected = {(p.left.text.replace("eps", ""), p.right.text.replace("eps", ""))
                for p in eval_expr(e, bounds=Bounds(9, 4, 4, 4, 40))}
    assert got == expected


def test_separator_avoids_letters():
    pg = compile(Times(LetterE("#"), LetterE("a")))
    assert pg.separator != "#"
    assert finite_words(pg.grammar) == {"#" + Letter(pg.separator).text + "a"}


def test_star_unrolls_finitely():
    pg = compile(parse("(a >< b)^*"))
    g = pg.grammar
    assert not g.accepting and not g.open_accepting
    sep = pg.separator
    assert finite_words(g, 16) == {"a" * n + sep + "b" * n for n in range(3)}


def test_omega_families_include_every_superset():
    g = compile(parse("(a >< b)^w"))
    (family,) = g.open_accepting
    assert len(family.core) == 1
    for extra in family.optional:
        assert g.accepts(family.core | {extra})
    assert g.accepts(family.universe)


def test_mu_variable_is_the_start_and_not_accepting():
    g = compile(parse("mu x.(a.x + b)"))
    assert not g.accepting and not g.open_accepting
    words = finite_words(g, 30)
    assert {"b", "ab", "aab"} <= words
    assert all(set(w[:-1]) <= {"a"} and w.endswith("b") for w in words)


def test_open_expressions_are_rejected():
    with pytest.raises(NotClosed):
        compile(Var("x"))


@pytest.mark.parametrize("text", ROUNDTRIP)
def test_compile_outputs_validate(text):
    g = compile(parse(text))
    assert [d for d in validate(g) if d.level == "error"] == []


@settings(max_examples=300, deadline=None)
@given(closed_exprs(6))
def test_random_round_trip(e):
    # Pair-factor caps at least the weight budget never bind, so both sides
    # are cut by the same budget.
    b = Bounds(6, 6, 6, 6, 30)
    assert via_grammar(compile(e), b) == eval_expr(e, bounds=b)


def test_substitute_letter_by_word():
    g = grammar("S -> a h b")
    h = grammar("S -> c")
    assert finite_words(substitute_language(g, "h", h)) == {"acb"}


def test_identity_substitution():
    g = compile(parse("mu x.(a.x + (a >< eps)^w + b)"))
    h = grammar("S -> a")
    out = substitute_language(g, "a", h)
    b = Bounds(8, 4, 4, 4, 40)
    assert via_grammar(out, b) == via_grammar(g, b)


def test_substitution_into_a_pair_separator():
    # {u v # v' u'} for u#u' in L and v#v' in L'.
    outer = grammar("S -> a # b | # c")
    inner = grammar("S -> d # e | #")
    out = substitute_language(outer, "#", inner)
    assert finite_words(out, 20) == {"ad#eb", "a#b", "d#ec", "#c"}


def test_substitution_rejects_unknown_letter():
    with pytest.raises(AlphabetClash):
        substitute_language(grammar("S -> a"), "z", grammar("S -> b"))
