import pytest
from hypothesis import given, settings, strategies as st

from corpus import NOT_WELL_ORDERED, ROUNDTRIP, SCATTERED_UNIVERSE
from exprgen import closed_exprs
from mcfl.errors import NotWellOrderedShape, ParseError, SortError, UnknownLetter
from mcfl.evaluate import Bounds, eval_expr
from mcfl.expr import (
    EPS_E, Dot, EpsE, LetterE, Mu, OmegaP, OmegaT, Plus, StarP, Times, Var,
    embed_w_to_s, free_vars, is_closed, is_w_fragment, iter_nodes, parse, render,
    substitute, to_w,
)

a, b = LetterE("a"), LetterE("b")


def test_parse_flagships():
    e = parse("mu x.(x^w + a + b + eps)")
    x = e.var
    assert e == Mu(x, Plus(Plus(Plus(OmegaP(Times(Var(x), EPS_E)), a), b), EPS_E))
    s = parse(SCATTERED_UNIVERSE)
    assert isinstance(s, Mu) and is_closed(s)
    assert parse("eps") == EPS_E


def test_parse_modes():
    assert parse("a^w", mode="w") == OmegaT(a)
    assert parse("a^w") == OmegaP(Times(a, EPS_E))
    with pytest.raises(SortError):
        parse("a^w", mode="strict")


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as info:
        parse("a + + b")
    assert info.value.position == 4
    with pytest.raises(SortError):
        parse("(a >< b) + a")
    with pytest.raises(UnknownLetter):
        parse("a.c", alphabet={"a", "b"})


def test_precedence():
    assert parse("a + b.a") == Plus(a, Dot(b, a))
    assert parse("a b") == Dot(a, b)
    assert parse("(a >< b)^*") == StarP(Times(a, b))
    e = parse("mu x. a.x + eps")
    assert isinstance(e, Mu) and isinstance(e.body, Plus)


def test_binders_are_renamed_apart():
    e = parse("mu x.(x + mu x.(a.x))")
    binders = [n.var for n in iter_nodes(e) if isinstance(n, Mu)]
    assert len(set(binders)) == 2
    e = parse("mu x.(x.y)", variables=["y"])
    assert free_vars(e) == {"y"}


def test_free_vars_examples():
    assert free_vars(Mu("x", Dot(Var("x"), Var("y")))) == {"y"}
    assert free_vars(Var("x")) == {"x"}
    assert is_closed(parse(SCATTERED_UNIVERSE))


def test_substitute_examples():
    assert substitute(Dot(Var("x"), a), "x", b) == Dot(b, a)
    assert substitute(Mu("x", Var("x")), "x", a) == Mu("x", Var("x"))
    e = substitute(Mu("y", Dot(Var("x"), Var("y"))), "x", Var("y"))
    assert free_vars(e) == {"y"}
    assert isinstance(e, Mu) and e.var != "y"


def test_embed_examples():
    assert embed_w_to_s(OmegaT(a)) == OmegaP(Times(a, EPS_E))
    assert embed_w_to_s(EPS_E) == EPS_E
    w = parse("mu x.(x^w + a + b + eps)", mode="w")
    assert embed_w_to_s(w) == parse("mu x.((x >< eps)^w + a + b + eps)")


def test_to_w_examples():
    assert to_w(parse("(a >< eps)^w")) == OmegaT(a)
    star = to_w(parse("((a >< eps)^*)^w"))
    assert isinstance(star, OmegaT) and isinstance(star.body, Mu)
    for bounds in (Bounds(4, 4, 4, 4, 40), Bounds(7, 4, 4, 4, 40)):
        assert eval_expr(star, bounds=bounds) == eval_expr(parse("((a >< eps)^*)^w"), bounds=bounds)
    with pytest.raises(NotWellOrderedShape):
        to_w(parse("(a >< b)^w"))


@pytest.mark.parametrize("text", ROUNDTRIP + [src for src, _ in NOT_WELL_ORDERED])
def test_print_parse_round_trip_on_corpus(text):
    e = parse(text)
    assert parse(render(e)) == e


@settings(max_examples=200, deadline=None)
@given(closed_exprs(6))
def test_print_parse_round_trip_on_random(e):
    e = parse(render(e))
    assert parse(render(e)) == e


w_exprs = st.recursive(
    st.sampled_from([a, b, EPS_E]),
    lambda inner: st.one_of(
        st.builds(Plus, inner, inner),
        st.builds(Dot, inner, inner),
        inner.map(OmegaT),
    ),
    max_leaves=6,
)


@settings(max_examples=100, deadline=None)
@given(w_exprs)
def test_embedding_preserves_eval_and_inverts(e):
    assert is_w_fragment(e)
    s = embed_w_to_s(e)
    bounds = Bounds(7, 3, 3, 3, 40)
    assert eval_expr(s, bounds=bounds) == eval_expr(e, bounds=bounds)
    assert to_w(s) == e


names = st.sampled_from(["x", "y", "z"])
open_exprs = st.recursive(
    st.one_of(st.sampled_from([a, EPS_E]), names.map(Var)),
    lambda inner: st.one_of(
        st.builds(Plus, inner, inner),
        st.builds(Dot, inner, inner),
        st.builds(Mu, names, inner),
    ),
    max_leaves=6,
)


@settings(max_examples=300)
@given(open_exprs, names, open_exprs)
def test_substitute_free_variable_equation(e, x, s):
    out = substitute(e, x, s)
    if x in free_vars(e):
        assert free_vars(out) == (free_vars(e) - {x}) | free_vars(s)
    else:
        assert free_vars(out) == free_vars(e)


def test_eps_literal_is_shared():
    assert isinstance(parse("eps"), EpsE)
