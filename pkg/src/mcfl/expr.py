"""Two-sorted fixed-point expressions over words (sort T) and word pairs (sort P).

Concrete syntax, loosest binding first::

    mu x. t          binder, extends as far right as possible
    t + t            union (either sort, both operands the same sort)
    t >< t           pair former, T x T -> P
    t . t  or  t t   concatenation (either sort)
    t^w  t^*         omega power P -> T, star P -> P
    a  x  eps  0  (t)

Identifiers bound by an enclosing ``mu`` are variables, every other identifier
is a letter unless it was declared as a free variable.  ``0`` is the empty
language.  In the default ``compat`` mode ``t^w`` on a T-sort operand is read
as ``(t >< eps)^w``; ``strict`` mode rejects it and ``w`` mode keeps it as the
one-sorted omega power of the well-ordered fragment.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .errors import NotWellOrderedShape, ParseError, SortError, UnknownLetter

T, P = "T", "P"


class Expr:
    sort = T
    __slots__ = ()

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class LetterE(Expr):
    name: str


@dataclass(frozen=True)
class EpsE(Expr):
    pass


@dataclass(frozen=True)
class EmptyE(Expr):
    """The empty language; only produced by ``decide`` internals and tests."""


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Plus(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Dot(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mu(Expr):
    var: str
    body: Expr


@dataclass(frozen=True)
class OmegaP(Expr):
    """omega power of a pair language; sort P -> T."""
    body: Expr


@dataclass(frozen=True)
class OmegaT(Expr):
    """omega power of a word language (well-ordered fragment only)."""
    body: Expr


@dataclass(frozen=True)
class Times(Expr):
    sort = P
    left: Expr
    right: Expr


@dataclass(frozen=True)
class PlusP(Expr):
    sort = P
    left: Expr
    right: Expr


@dataclass(frozen=True)
class DotP(Expr):
    sort = P
    left: Expr
    right: Expr


@dataclass(frozen=True)
class StarP(Expr):
    sort = P
    body: Expr


EPS_E = EpsE()
EMPTY_E = EmptyE()



def children(e: Expr) -> tuple:
    """Subexpressions of ``e`` in left-to-right order."""
    if isinstance(e, (Plus, Dot, Times, PlusP, DotP)):
        return (e.left, e.right)
    if isinstance(e, Mu):
        return (e.body,)
    if isinstance(e, (OmegaP, OmegaT, StarP)):
        return (e.body,)
    return ()


def rebuild(e: Expr, kids) -> Expr:
    if isinstance(e, (Plus, Dot, Times, PlusP, DotP)):
        return type(e)(kids[0], kids[1])
    if isinstance(e, Mu):
        return Mu(e.var, kids[0])
    if isinstance(e, (OmegaP, OmegaT, StarP)):
        return type(e)(kids[0])
    return e


def iter_nodes(e: Expr):
    """Pre-order traversal without recursion."""
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def size(e: Expr) -> int:
    return sum(1 for _ in iter_nodes(e))


def names(e: Expr) -> set:
    """Every letter, variable and binder name occurring in ``e``."""
    out = set()
    for node in iter_nodes(e):
        if isinstance(node, (LetterE, Var)):
            out.add(node.name)
        elif isinstance(node, Mu):
            out.add(node.var)
    return out


def letters(e: Expr) -> set:
    return {n.name for n in iter_nodes(e) if isinstance(n, LetterE)}


def free_vars(e: Expr) -> set:
    out = set()
    stack = [(e, frozenset())]
    while stack:
        node, bound = stack.pop()
        if isinstance(node, Var):
            if node.name not in bound:
                out.add(node.name)
        elif isinstance(node, Mu):
            stack.append((node.body, bound | {node.var}))
        else:
            stack.extend((c, bound) for c in children(node))
    return out


def is_closed(e: Expr) -> bool:
    return not free_vars(e)


def fresh_name(base: str, taken) -> str:
    if base not in taken:
        return base
    for k in itertools.count(1):
        candidate = f"{base}_{k}"
        if candidate not in taken:
            return candidate


def substitute(e: Expr, x: str, s: Expr) -> Expr:
    """Capture-avoiding substitution of ``s`` for the free occurrences of ``x``."""
    s_free = free_vars(s)

    def go(node):
        if isinstance(node, Var):
            return s if node.name == x else node
        if isinstance(node, Mu):
            if node.var == x or x not in free_vars(node.body):
                return node
            if node.var in s_free:
                taken = names(node.body) | names(s) | {x}
                y = fresh_name(node.var, taken)
                body = substitute(node.body, node.var, Var(y))
                return Mu(y, go(body))
            return Mu(node.var, go(node.body))
        kids = children(node)
        if not kids:
            return node
        return rebuild(node, [go(k) for k in kids])

    return go(e)


# -- the well-ordered fragment --------------------------------------------------

def embed_w_to_s(e: Expr) -> Expr:
    """Replace every one-sorted ``t^w`` by ``(t >< eps)^w``."""
    if isinstance(e, OmegaT):
        return OmegaP(Times(embed_w_to_s(e.body), EPS_E))
    kids = children(e)
    if not kids:
        return e
    return rebuild(e, [embed_w_to_s(k) for k in kids])


def to_w(e: Expr) -> Expr:
    """Translate an expression whose pairs all have right component ``eps``.

    ``t >< eps`` becomes ``t`` and ``p^*`` becomes ``mu x.(p x + eps)``.
    Raises NotWellOrderedShape when some ``t1 >< t2`` has ``t2 != eps``.
    """
    taken = names(e)

    def go(node):
        if isinstance(node, Times):
            if not isinstance(node.right, EpsE):
                raise NotWellOrderedShape(f"pair {render(node)} has a non-eps right component")
            return go(node.left)
        if isinstance(node, PlusP):
            return Plus(go(node.left), go(node.right))
        if isinstance(node, DotP):
            return Dot(go(node.left), go(node.right))
        if isinstance(node, StarP):
            x = fresh_name("x", taken)
            taken.add(x)
            return Mu(x, Plus(Dot(go(node.body), Var(x)), EPS_E))
        if isinstance(node, OmegaP):
            return OmegaT(go(node.body))
        kids = children(node)
        if not kids:
            return node
        return rebuild(node, [go(k) for k in kids])

    return go(e)


def is_w_fragment(e: Expr) -> bool:
    return not any(isinstance(n, (Times, PlusP, DotP, StarP, OmegaP)) for n in iter_nodes(e))


# -- printing -------------------------------------------------------------------

_PREC_MU, _PREC_PLUS, _PREC_TIMES, _PREC_DOT, _PREC_POST = 0, 1, 2, 3, 4


def render(e: Expr) -> str:
    """Concrete syntax for ``e``; ``parse(render(e))`` gives ``e`` back."""
    return _render(e, _PREC_MU)


def _render(e, prec):
    if isinstance(e, LetterE) or isinstance(e, Var):
        return e.name
    if isinstance(e, EpsE):
        return "eps"
    if isinstance(e, EmptyE):
        return "0"
    if isinstance(e, (Plus, PlusP)):
        text = f"{_render(e.left, _PREC_PLUS)} + {_render(e.right, _PREC_TIMES)}"
        own = _PREC_PLUS
    elif isinstance(e, Times):
        text = f"{_render(e.left, _PREC_DOT)} >< {_render(e.right, _PREC_DOT)}"
        own = _PREC_TIMES
    elif isinstance(e, (Dot, DotP)):
        text = f"{_render(e.left, _PREC_DOT)}.{_render(e.right, _PREC_POST)}"
        own = _PREC_DOT
    elif isinstance(e, (OmegaP, OmegaT)):
        text = _render(e.body, _PREC_POST) + "^w"
        own = _PREC_POST
    elif isinstance(e, StarP):
        text = _render(e.body, _PREC_POST) + "^*"
        own = _PREC_POST
    elif isinstance(e, Mu):
        body = _render(e.body, _PREC_MU)
        if children(e.body):
            body = f"({body})" if not isinstance(e.body, (Mu, OmegaP, OmegaT, StarP)) else body
        text = f"mu {e.var}.{body}"
        own = _PREC_MU
    else:
        raise TypeError(f"not an expression: {e!r}")
    return f"({text})" if own < prec else text


# -- parsing --------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<op>><|\^w|\^\*|[()+.])|(?P<zero>0(?![A-Za-z0-9_']))|(?P<ident>[A-Za-z_][A-Za-z0-9_']*))"
)
_KEYWORDS = {"mu", "eps"}
_ATOM_START = {"ident", "eps", "zero", "(", "mu"}
_BINARY = {"+": _PREC_PLUS, "><": _PREC_TIMES, ".": _PREC_DOT}


def _tokenize(text):
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = pos
        if m.group("op"):
            tokens.append((m.group("op"), m.group("op"), start))
        elif m.group("zero"):
            tokens.append(("zero", "0", start))
        else:
            word = m.group("ident")
            kind = word if word in _KEYWORDS else "ident"
            tokens.append((kind, word, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def pos(self):
        return self.tokens[self.i][2]

    def take(self, kind):
        tok = self.tokens[self.i]
        if tok[0] != kind:
            shown = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {shown}", tok[2])
        self.i += 1
        return tok

    def expr(self, min_prec=0, no_times=False):
        """Precedence climbing; a mu body (``no_times``) stops before a top-level '><'."""
        left = self.prefix(no_times)
        while True:
            kind = self.peek()
            if kind in _BINARY:
                op = kind
            elif kind in _ATOM_START:
                op = "juxt"
            else:
                return left
            prec = _BINARY.get(op, _PREC_DOT)
            if prec < min_prec or (op == "><" and no_times):
                return left
            start = self.pos()
            if op != "juxt":
                self.i += 1
            right = self.expr(prec + 1, no_times)
            tag = {"+": "plus", "><": "times"}.get(op, "dot")
            if tag == "times" and right[0] == "times":
                raise ParseError("'><' does not associate", start)
            left = (tag, left, right, start)

    def prefix(self, no_times):
        if self.peek() == "mu":
            _, _, start = self.take("mu")
            _, name, _ = self.take("ident")
            self.take(".")
            return ("mu", name, self.expr(_PREC_PLUS, True), start)
        return self.post()

    def post(self):
        node = self.atom()
        while self.peek() in ("^w", "^*"):
            kind, _, start = self.tokens[self.i]
            self.i += 1
            node = ("omega" if kind == "^w" else "star", node, start)
        return node

    def atom(self):
        kind, value, start = self.tokens[self.i]
        if kind == "ident":
            self.i += 1
            return ("ident", value, start)
        if kind == "eps":
            self.i += 1
            return ("eps", start)
        if kind == "zero":
            self.i += 1
            return ("zero", start)
        if kind == "(":
            self.i += 1
            node = self.expr()
            self.take(")")
            return node
        shown = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"unexpected {shown}", start)


def _raw_free_idents(raw, bound, out):
    tag = raw[0]
    if tag == "ident":
        if raw[1] not in bound:
            out.add(raw[1])
    elif tag == "mu":
        _raw_free_idents(raw[2], bound | {raw[1]}, out)
    elif tag in ("plus", "dot", "times"):
        _raw_free_idents(raw[1], bound, out)
        _raw_free_idents(raw[2], bound, out)
    elif tag in ("omega", "star"):
        _raw_free_idents(raw[1], bound, out)


def parse(text: str, mode: str = "compat", variables=(), alphabet=None) -> Expr:
    """Parse concrete syntax into a well-sorted expression.

    ``variables`` names identifiers to read as free variables; ``alphabet``,
    when given, restricts the letters.  Binders are renamed apart from each
    other and from every free identifier.
    """
    if mode not in ("compat", "strict", "w"):
        raise ValueError(f"unknown mode {mode!r}")
    parser = _Parser(text)
    raw = parser.expr()
    if parser.peek() != "end":
        raise ParseError("trailing input", parser.pos())
    variables = set(variables)
    free = set()
    _raw_free_idents(raw, frozenset(), free)
    taken = set(free)

    def build(node, scope):
        tag = node[0]
        if tag == "ident":
            name = node[1]
            if name in scope:
                return Var(scope[name])
            if name in variables:
                return Var(name)
            if alphabet is not None and name not in alphabet:
                raise UnknownLetter(f"unknown letter {name!r}", node[2])
            return LetterE(name)
        if tag == "eps":
            return EPS_E
        if tag == "zero":
            return EMPTY_E
        if tag == "mu":
            new = fresh_name(node[1], taken)
            taken.add(new)
            body = build(node[2], {**scope, node[1]: new})
            if body.sort != T:
                raise SortError("mu body must denote a word language", node[3])
            return Mu(new, body)
        if tag in ("plus", "dot"):
            left, right = build(node[1], scope), build(node[2], scope)
            if left.sort != right.sort:
                op = "+" if tag == "plus" else "."
                raise SortError(f"operands of {op!r} have different sorts", node[3])
            if left.sort == P and mode == "w":
                raise SortError("pair operations are outside the well-ordered fragment", node[3])
            if tag == "plus":
                return Plus(left, right) if left.sort == T else PlusP(left, right)
            return Dot(left, right) if left.sort == T else DotP(left, right)
        if tag == "times":
            if mode == "w":
                raise SortError("'><' is outside the well-ordered fragment", node[3])
            left, right = build(node[1], scope), build(node[2], scope)
            if left.sort != T or right.sort != T:
                raise SortError("operands of '><' must denote word languages", node[3])
            return Times(left, right)
        if tag == "star":
            body = build(node[1], scope)
            if body.sort != P or mode == "w":
                raise SortError("'^*' applies to pair languages only", node[2])
            return StarP(body)
        if tag == "omega":
            body = build(node[1], scope)
            if body.sort == P:
                return OmegaP(body)
            if mode == "w":
                return OmegaT(body)
            if mode == "compat":
                return OmegaP(Times(body, EPS_E))
            raise SortError("'^w' on a word language; write (t >< eps)^w", node[2])
        raise AssertionError(tag)

    return build(raw, {})
