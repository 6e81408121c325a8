"""Symbolic scattered words of finite rank, and pairs of such words.

A word term is built from letters and the empty word by concatenation, the
omega power ``u^w`` (order type omega) and the reverse omega power ``u^-w``
(order type -omega).  Terms are compared through a canonical form; two equal
canonical forms always denote isomorphic words, but not conversely.

Canonical form:

* no ``Cat`` inside a ``Cat``, no ``Eps`` inside a ``Cat``, every ``Cat`` has
  at least two parts;
* ``Eps^w`` and ``Eps^-w`` are ``Eps``;
* powers have primitive bodies: ``(uu)^w`` is ``u^w``;
* a part directly left of ``(v p)^w`` equal to ``p`` is absorbed by rotating
  the body, ``p (v p)^w = (p v)^w``; symmetrically ``(p v)^-w p = (v p)^-w``.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterable, NamedTuple

from .errors import ParseError

__all__ = [
    "Word", "Eps", "Letter", "Cat", "OmegaPow", "RevOmegaPow", "EPS",
    "Pair", "EPS_PAIR", "cat", "omega", "rev_omega", "canonicalize",
    "pair_product", "pair_omega", "is_well_ordered", "rank_bound",
    "parse_word", "render_word", "render_pair", "sort_key", "pair_weight",
    "pair_size", "letters_of", "is_finite", "cat_size", "pair_product_size", "absorbs", "first_part",
    "last_part", "omega_hook", "rev_hook",
]

# Weight of one omega or reverse omega node; letters weigh 1.
OMEGA_WEIGHT = 3

_PLAIN_LETTER = re.compile(r"[A-Za-z0-9_#$@!?']")


# Every term is hash-consed on its rendering, so equal terms are the same
# object and identity comparison is term equality.
_INTERN: dict = {}


class Word:
    """Base class of word terms; immutable and hash-consed."""

    __slots__ = ("text", "size", "weight", "well_ordered", "rank")

    @classmethod
    def _make(cls, text, size, weight, well_ordered, rank, **extra):
        self = _INTERN.get(text)
        if self is not None:
            return self
        self = object.__new__(cls)
        for name, value in extra.items():
            object.__setattr__(self, name, value)
        object.__setattr__(self, "text", text)
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "weight", weight)
        object.__setattr__(self, "well_ordered", well_ordered)
        object.__setattr__(self, "rank", rank)
        _INTERN[text] = self
        return self

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __reduce__(self):
        return (parse_word, (self.text, False))

    def __repr__(self):
        return f"<{type(self).__name__} {self.text}>"

    def __str__(self):
        return self.text


class Eps(Word):
    __slots__ = ()

    def __new__(cls):
        return cls._make("eps", 1, 0, True, 0)


class Letter(Word):
    __slots__ = ("name",)

    def __new__(cls, name: str):
        if not name:
            raise ValueError("letter name must be nonempty")
        if len(name) == 1 and _PLAIN_LETTER.fullmatch(name):
            text = name
        else:
            text = "{" + name + "}"
        return cls._make(text, 1, 1, True, 0, name=name)


class Cat(Word):
    __slots__ = ("parts",)

    def __new__(cls, parts: Iterable[Word]):
        parts = tuple(parts)
        if len(parts) < 2:
            raise ValueError("Cat needs at least two parts")
        rendered = [f"({p.text})" if isinstance(p, Cat) else p.text for p in parts]
        text = "".join(rendered)
        if "eps" in text or any(isinstance(p, Eps) for p in parts):
            text = ".".join(rendered)
        hit = _INTERN.get(text)
        if hit is not None:
            return hit
        return cls._make(
            text,
            1 + sum(p.size for p in parts),
            sum(p.weight for p in parts),
            all(p.well_ordered for p in parts),
            max(p.rank for p in parts),
            parts=parts,
        )


def _atom_text(w: Word) -> str:
    return f"({w.text})" if isinstance(w, Cat) else w.text


class OmegaPow(Word):
    __slots__ = ("body",)

    def __new__(cls, body: Word):
        empty = isinstance(body, Eps)
        return cls._make(_atom_text(body) + "^w", 1 + body.size, OMEGA_WEIGHT + body.weight,
                         body.well_ordered, body.rank + (0 if empty else 1), body=body)


class RevOmegaPow(Word):
    __slots__ = ("body",)

    def __new__(cls, body: Word):
        empty = isinstance(body, Eps)
        return cls._make(_atom_text(body) + "^-w", 1 + body.size, OMEGA_WEIGHT + body.weight,
                         empty, body.rank + (0 if empty else 1), body=body)


EPS = Eps()


# -- canonical constructors -------------------------------------------------

def _parts(w: Word) -> tuple:
    if isinstance(w, Cat):
        return w.parts
    if isinstance(w, Eps):
        return ()
    return (w,)


def _make(parts) -> Word:
    if not parts:
        return EPS
    if len(parts) == 1:
        return parts[0]
    return Cat(parts)


def _primitive(parts: tuple) -> tuple:
    n = len(parts)
    for d in range(1, n // 2 + 1):
        if n % d == 0 and parts[:d] * (n // d) == parts:
            return parts[:d]
    return parts


def _push(out: list, q: Word) -> None:
    """Append one canonical non-Cat, non-Eps part, applying absorption."""
    if isinstance(q, OmegaPow):
        body = _parts(q.body)
        rotated = False
        while out and out[-1] == body[-1]:
            out.pop()
            body = body[-1:] + body[:-1]
            rotated = True
        if rotated:
            q = OmegaPow(_make(body))
    if out and isinstance(out[-1], RevOmegaPow):
        body = _parts(out[-1].body)
        if body[0] == q:
            out[-1] = RevOmegaPow(_make(body[1:] + body[:1]))
            return
    out.append(q)


def cat(*words: Word) -> Word:
    """Concatenate canonical terms, returning a canonical term."""
    if len(words) == 2:
        return _cat2(words[0], words[1])
    return _cat(words)


@lru_cache(maxsize=1 << 20)
def _cat2(u: Word, v: Word) -> Word:
    return _cat((u, v))


cat2 = _cat2


def _cat(words) -> Word:
    nonempty = [w for w in words if not isinstance(w, Eps)]
    if not nonempty:
        return EPS
    if len(nonempty) == 1:
        return nonempty[0]
    out = list(_parts(nonempty[0]))
    for w in nonempty[1:]:
        for q in _parts(w):
            _push(out, q)
    return _make(out)


def _inner_size(w: Word) -> int:
    if isinstance(w, Eps):
        return 0
    return w.size - 1 if isinstance(w, Cat) else w.size


def first_part(w: Word):
    parts = _parts(w)
    return parts[0] if parts else None


def last_part(w: Word):
    parts = _parts(w)
    return parts[-1] if parts else None


def omega_hook(w: Word):
    """Part that a leading omega power of ``w`` would absorb from its left."""
    f = first_part(w)
    return _parts(f.body)[-1] if isinstance(f, OmegaPow) else None


def rev_hook(w: Word):
    """Part that a trailing reverse omega power of ``w`` would absorb from its right."""
    last = last_part(w)
    return _parts(last.body)[0] if isinstance(last, RevOmegaPow) else None


def absorbs(u: Word, v: Word) -> bool:
    """Whether ``cat(u, v)`` rewrites anything at the boundary of ``u`` and ``v``."""
    ul, vf = last_part(u), first_part(v)
    if ul is None or vf is None:
        return False
    hook = omega_hook(v)
    if hook is not None and hook == ul:
        return True
    hook = rev_hook(u)
    return hook is not None and hook == vf


def cat_size(u: Word, v: Word):
    """Size of ``cat(u, v)`` when nothing is absorbed, else None."""
    if isinstance(u, Eps):
        return v.size
    if isinstance(v, Eps):
        return u.size
    if absorbs(u, v):
        return None
    return 1 + _inner_size(u) + _inner_size(v)


def omega(body: Word) -> Word:
    if isinstance(body, Eps):
        return EPS
    return OmegaPow(_make(_primitive(_parts(body))))


def rev_omega(body: Word) -> Word:
    if isinstance(body, Eps):
        return EPS
    return RevOmegaPow(_make(_primitive(_parts(body))))


def canonicalize(w: Word) -> Word:
    """Rewrite any structurally valid term to canonical form (idempotent)."""
    if isinstance(w, (Eps, Letter)):
        return w
    if isinstance(w, Cat):
        return cat(*(canonicalize(p) for p in w.parts))
    if isinstance(w, OmegaPow):
        return omega(canonicalize(w.body))
    if isinstance(w, RevOmegaPow):
        return rev_omega(canonicalize(w.body))
    raise TypeError(f"not a word term: {w!r}")


def is_well_ordered(w: Word) -> bool:
    return w.well_ordered


def rank_bound(w: Word) -> int:
    """Upper bound on the Hausdorff rank, read off the VD construction."""
    return w.rank


def is_finite(w: Word) -> bool:
    return w.rank == 0


def letters_of(w: Word) -> set:
    if isinstance(w, Letter):
        return {w.name}
    if isinstance(w, Eps):
        return set()
    if isinstance(w, Cat):
        return set().union(*(letters_of(p) for p in w.parts))
    return letters_of(w.body)


def sort_key(w: Word):
    return (len(w.text), w.text)


def render_word(w: Word) -> str:
    return w.text


# -- pairs ------------------------------------------------------------------

class Pair(NamedTuple):
    left: Word
    right: Word

    def __str__(self):
        return render_pair(self)


EPS_PAIR = Pair(EPS, EPS)


def render_pair(p: Pair) -> str:
    return f"({p.left.text}, {p.right.text})"


def pair_weight(p: Pair) -> int:
    return p.left.weight + p.right.weight


def pair_size(p: Pair) -> int:
    """Node count of both components, an empty component counting zero."""
    return (p.left.size if p.left is not EPS else 0) + (p.right.size if p.right is not EPS else 0)


def pair_product(p: Pair, q: Pair) -> Pair:
    """``(u, v) . (u', v') = (u u', v' v)``."""
    return Pair(_cat2(p.left, q.left), _cat2(q.right, p.right))


def pair_product_size(p: Pair, q: Pair):
    """``pair_size(pair_product(p, q))`` when known cheaply, else None."""
    a = cat_size(p.left, q.left)
    if a is None:
        return None
    b = cat_size(q.right, p.right)
    if b is None:
        return None
    left_empty = p.left is EPS and q.left is EPS
    right_empty = p.right is EPS and q.right is EPS
    return (0 if left_empty else a) + (0 if right_empty else b)


def pair_omega(prefix: Iterable[Pair], period: Pair) -> Word:
    """Word of the eventually periodic sequence ``prefix, period, period, ...``.

    Left components are read left to right and followed by ``u^w``; right
    components follow as ``v^-w`` and then in reverse order.
    """
    prefix = list(prefix)
    left = cat(*(p.left for p in prefix), omega(period.left))
    right = cat(rev_omega(period.right), *(p.right for p in reversed(prefix)))
    return cat(left, right)


# -- text syntax ------------------------------------------------------------

_WORD_TOKEN = re.compile(r"\s*(?:(eps)|\{([^{}]+)\}|(\^-w)|(\^w)|([().])|(" + _PLAIN_LETTER.pattern + "))")


def parse_word(text: str, canonical: bool = True) -> Word:
    """Parse the rendering produced by ``render_word``.

    Letters are single characters or ``{name}``; ``.`` between factors is
    optional; ``^w`` and ``^-w`` are postfix.
    """
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _WORD_TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("eps", None, start))
        elif m.group(2):
            tokens.append(("letter", m.group(2), start))
        elif m.group(3):
            tokens.append(("rev", None, start))
        elif m.group(4):
            tokens.append(("omega", None, start))
        elif m.group(5):
            tokens.append((m.group(5), None, start))
        else:
            tokens.append(("letter", m.group(6), start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    i = 0

    def peek():
        return tokens[i][0]

    def word():
        nonlocal i
        parts = []
        while True:
            if peek() == ".":
                if not parts:
                    raise ParseError("'.' with nothing on its left", tokens[i][2])
                i += 1
            if peek() not in ("eps", "letter", "("):
                break
            parts.append(factor())
        if not parts:
            raise ParseError("expected a word", tokens[i][2])
        return parts[0] if len(parts) == 1 else Cat(parts)

    def factor():
        nonlocal i
        kind, value, position = tokens[i]
        if kind == "eps":
            i += 1
            node = EPS
        elif kind == "letter":
            i += 1
            node = Letter(value)
        else:
            i += 1
            node = word()
            if peek() != ")":
                raise ParseError("expected ')'", tokens[i][2])
            i += 1
        while peek() in ("omega", "rev"):
            node = OmegaPow(node) if peek() == "omega" else RevOmegaPow(node)
            i += 1
        return node

    result = word()
    if peek() != "end":
        raise ParseError("trailing input", tokens[i][2])
    return canonicalize(result) if canonical else result
