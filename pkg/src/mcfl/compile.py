"""Compilation of closed expressions into Muller context-free grammars.

Pair languages are grammars over the letters plus one separator terminal,
every generated word containing the separator exactly once: the pair
``(u, v)`` is the word ``u # v``.

* ``t1 >< t2`` is ``S -> S1 # S2``.
* Pair concatenation substitutes the second grammar for the separator of the
  first, giving ``u1 u2 # v2 v1``.
* ``p^*`` turns the separator of ``p`` into a nonterminal ``N -> # | S_p``.
* ``p^w`` turns it into a nonterminal ``N -> S_p`` and accepts ``N`` together
  with any set of nonterminals of ``p``.
* ``mu x.t`` compiles ``t`` with ``x`` as a letter, then makes ``x`` a
  nonterminal ``x -> S_t`` and the start symbol.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import AlphabetClash, NotClosed
from .expr import (
    Dot, DotP, EmptyE, EpsE, Expr, LetterE, Mu, OmegaP, OmegaT, P, Plus, PlusP,
    StarP, Times, Var, free_vars, iter_nodes, names,
)
from .grammar import Mcfg, OpenFamily, Production, validate


@dataclass
class _Part:
    """A subgrammar: its start symbol, productions and accepting sets."""

    start: str
    nonterminals: list
    productions: list
    accepting: list = field(default_factory=list)
    open_accepting: list = field(default_factory=list)

    def merge(self, *others):
        for o in others:
            self.nonterminals += o.nonterminals
            self.productions += o.productions
            self.accepting += o.accepting
            self.open_accepting += o.open_accepting
        return self

    def rename_terminal(self, old: str, new: str):
        self.productions = [
            Production(p.head, tuple(new if s == old else s for s in p.body))
            for p in self.productions
        ]


@dataclass(frozen=True)
class PairGrammar:
    """A grammar for ``{u # v}`` standing for the pair language ``{(u, v)}``."""

    grammar: Mcfg
    separator: str


class _Compiler:
    def __init__(self, e: Expr):
        self.taken = set(names(e))
        self.counter = 0
        self.separator = self._fresh_terminal("#")

    def _fresh_terminal(self, base: str) -> str:
        name, k = base, 1
        while name in self.taken:
            k += 1
            name = f"{base}{k}"
        self.taken.add(name)
        return name

    def fresh(self) -> str:
        while True:
            self.counter += 1
            name = f"N{self.counter}"
            if name not in self.taken:
                self.taken.add(name)
                return name

    def unit(self, *body) -> _Part:
        s = self.fresh()
        return _Part(s, [s], [Production(s, tuple(body))])

    def run(self, e: Expr) -> _Part:
        # Iterative post-order so deep expressions do not exhaust the stack.
        values = []
        stack = [(e, False)]
        while stack:
            node, ready = stack.pop()
            if not ready:
                stack.append((node, True))
                for k in reversed(_kids(node)):
                    stack.append((k, False))
                continue
            n = len(_kids(node))
            kids = values[len(values) - n:]
            del values[len(values) - n:]
            values.append(self.node(node, kids))
        return values[0]

    def node(self, e: Expr, kids: list) -> _Part:
        sep = self.separator
        if isinstance(e, LetterE):
            return self.unit(e.name)
        if isinstance(e, Var):
            return self.unit(e.name)
        if isinstance(e, EpsE):
            return self.unit()
        if isinstance(e, EmptyE):
            s = self.fresh()
            return _Part(s, [s], [])
        if isinstance(e, (Plus, PlusP)):
            a, b = kids
            s = self.fresh()
            part = _Part(s, [s], [Production(s, (a.start,)), Production(s, (b.start,))])
            return part.merge(a, b)
        if isinstance(e, Dot):
            a, b = kids
            s = self.fresh()
            return _Part(s, [s], [Production(s, (a.start, b.start))]).merge(a, b)
        if isinstance(e, Times):
            a, b = kids
            s = self.fresh()
            return _Part(s, [s], [Production(s, (a.start, sep, b.start))]).merge(a, b)
        if isinstance(e, DotP):
            a, b = kids
            a.rename_terminal(sep, b.start)
            return a.merge(b)
        if isinstance(e, StarP):
            (a,) = kids
            n = self.fresh()
            a.rename_terminal(sep, n)
            part = _Part(n, [n], [Production(n, (sep,)), Production(n, (a.start,))])
            return part.merge(a)
        if isinstance(e, (OmegaP, OmegaT)):
            (a,) = kids
            if isinstance(e, OmegaT):
                # (t)^w on words is (t >< eps)^w.
                s = self.fresh()
                a = _Part(s, [s], [Production(s, (a.start, sep))]).merge(a)
            n = self.fresh()
            a.rename_terminal(sep, n)
            family = OpenFamily(frozenset([n]), frozenset(a.nonterminals))
            part = _Part(n, [n], [Production(n, (a.start,))], [], [family])
            return part.merge(a)
        if isinstance(e, Mu):
            (a,) = kids
            x = self.fresh()
            a.rename_terminal(e.var, x)
            return _Part(x, [x], [Production(x, (a.start,))]).merge(a)
        raise TypeError(f"not an expression: {e!r}")


def _kids(e: Expr) -> tuple:
    if isinstance(e, (LetterE, Var, EpsE, EmptyE)):
        return ()
    if isinstance(e, (Mu, StarP, OmegaP, OmegaT)):
        return (e.body,)
    return (e.left, e.right)


def compile(e: Expr):
    """Grammar for a closed expression; a ``PairGrammar`` when ``e`` has sort P."""
    if free_vars(e):
        raise NotClosed(f"free variables: {', '.join(sorted(free_vars(e)))}")
    c = _Compiler(e)
    part = c.run(e)
    letters = sorted({n.name for n in iter_nodes(e) if isinstance(n, LetterE)})
    terminals = letters + ([c.separator] if e.sort == P else [])
    nonterminals = sorted(part.nonterminals, key=lambda n: int(n[1:]))
    g = Mcfg(nonterminals, terminals, part.productions, part.start,
             part.accepting, part.open_accepting)
    validate(g)
    return PairGrammar(g, c.separator) if e.sort == P else g


def substitute_language(g: Mcfg, letter: str, h: Mcfg) -> Mcfg:
    """Grammar for ``g`` with each ``letter`` replaced by any word of ``h``.

    The nonterminals of ``h`` are renamed apart from ``g``; every occurrence
    of ``letter`` becomes a fresh bridge nonterminal with the single
    production ``bridge -> S_h``.  The bridge is in no accepting set.
    """
    if letter not in g.terminals:
        raise AlphabetClash(f"{letter!r} is not a terminal of the grammar")
    taken = set(g.nonterminals) | set(g.terminals) | set(h.terminals)

    def fresh(base):
        name, k = base, 1
        while name in taken:
            k += 1
            name = f"{base}_{k}"
        taken.add(name)
        return name

    ren = {a: fresh(a) for a in h.nonterminals}
    if letter in ren.values():
        raise AlphabetClash(f"{letter!r} collides with a renamed nonterminal")
    bridge = fresh(f"{letter}_sub")
    prods = [Production(p.head, tuple(bridge if s == letter else s for s in p.body))
             for p in g.productions]
    prods.append(Production(bridge, (ren[h.start],)))
    prods += [Production(ren[p.head], tuple(ren.get(s, s) for s in p.body)) for p in h.productions]
    terminals = [t for t in g.terminals if t != letter]
    terminals += [t for t in h.terminals if t not in terminals]
    out = Mcfg(
        list(g.nonterminals) + [bridge] + [ren[a] for a in h.nonterminals],
        terminals,
        prods,
        g.start,
        list(g.accepting) + [frozenset(ren[a] for a in f) for f in h.accepting],
        list(g.open_accepting) + [
            OpenFamily(frozenset(ren[a] for a in f.core), frozenset(ren[a] for a in f.optional))
            for f in h.open_accepting],
    )
    validate(out)
    return out
