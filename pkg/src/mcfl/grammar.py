"""Muller context-free grammars and their equation systems.

A grammar has nonterminals, terminals, productions ``A -> X1 ... Xk`` and a
family of accepting sets of nonterminals.  An infinite derivation path is
accepted when the nonterminals it visits infinitely often form an accepting
set.  Besides explicit sets a grammar may list open families:
``accept: N | S A`` accepts ``{N}`` together with any subset of ``{S, A}``.

The file format is line based::

    // comment
    nonterminals: S I
    terminals: a b
    start: S
    S -> a | b | eps | I
    I -> S I
    accept: I

Symbols on a right-hand side are separated by blanks; ``eps`` is the empty
right-hand side.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import chain

from . import words as W
from .errors import EmptyRoot, InvalidGrammar, ParseError
from .expr import EMPTY_E, EPS_E, Dot, DotP, Expr, LetterE, OmegaP, Plus, PlusP, StarP, Times, Var, render


@dataclass(frozen=True)
class Production:
    head: str
    body: tuple

    def __str__(self):
        return f"{self.head} -> {' '.join(self.body) if self.body else 'eps'}"


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "error" or "warning"
    message: str

    def __str__(self):
        return f"{self.level}: {self.message}"


@dataclass(frozen=True)
class OpenFamily:
    """The accepting sets ``core | H`` for every subset ``H`` of ``optional``."""

    core: frozenset
    optional: frozenset

    def contains(self, nts) -> bool:
        return self.core <= nts <= self.core | self.optional

    @property
    def universe(self) -> frozenset:
        return self.core | self.optional


@dataclass(frozen=True)
class Mcfg:
    nonterminals: tuple
    terminals: tuple
    productions: tuple
    start: str
    accepting: tuple = ()
    open_accepting: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "nonterminals", tuple(self.nonterminals))
        object.__setattr__(self, "terminals", tuple(self.terminals))
        object.__setattr__(self, "productions", tuple(self.productions))
        object.__setattr__(self, "accepting", tuple(frozenset(f) for f in self.accepting))
        object.__setattr__(self, "open_accepting", tuple(
            OpenFamily(frozenset(f.core), frozenset(f.optional)) for f in self.open_accepting))

    def accepts(self, nts) -> bool:
        """Whether ``nts`` is an accepting set."""
        nts = frozenset(nts)
        return nts in self.accepting or any(f.contains(nts) for f in self.open_accepting)

    def productions_of(self, head: str) -> list:
        return [p for p in self.productions if p.head == head]

    def is_nonterminal(self, symbol: str) -> bool:
        return symbol in self._nonterminal_set

    @property
    def _nonterminal_set(self):
        cached = self.__dict__.get("_nts")
        if cached is None:
            cached = frozenset(self.nonterminals)
            object.__setattr__(self, "_nts", cached)
        return cached


def grammar(productions: str, start: str = "S", accepting=(), terminals=None) -> Mcfg:
    """Small constructor for tests: ``grammar("S -> a S | b")``.

    Heads are the nonterminals; every other symbol is a terminal unless
    ``terminals`` says otherwise.
    """
    prods = []
    for line in productions.replace(";", "\n").splitlines():
        if line.strip():
            prods.extend(_parse_production(line, 0))
    heads = list(dict.fromkeys(p.head for p in prods))
    if terminals is None:
        terminals = [s for s in dict.fromkeys(chain.from_iterable(p.body for p in prods))
                     if s not in heads]
    return Mcfg(heads, terminals, prods, start, [frozenset(f.split()) if isinstance(f, str) else f
                                                  for f in accepting])


# -- file format ------------------------------------------------------------------

_HEADER = re.compile(r"^(nonterminals|terminals|start|accept)\s*:(.*)$")
_ARROW = re.compile(r"^(\S+)\s*->(.*)$")


def _parse_production(line: str, lineno: int) -> list:
    m = _ARROW.match(line.strip())
    if not m:
        raise ParseError(f"line {lineno}: expected 'A -> ...'", lineno)
    head, rest = m.group(1), m.group(2)
    out = []
    for alt in rest.split("|"):
        syms = alt.split()
        if not syms:
            raise ParseError(f"line {lineno}: empty alternative for {head}", lineno)
        if syms == ["eps"]:
            syms = []
        elif "eps" in syms:
            raise ParseError(f"line {lineno}: 'eps' must stand alone", lineno)
        out.append(Production(head, tuple(syms)))
    return out


def parse_grammar(text: str) -> Mcfg:
    """Read the line-based grammar format; the result is validated."""
    nonterminals = terminals = start = None
    productions, accepting, open_accepting = [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("//", 1)[0].strip()
        if not line:
            continue
        m = _HEADER.match(line)
        if m:
            key, value = m.group(1), m.group(2).split()
            if key == "nonterminals":
                nonterminals = value
            elif key == "terminals":
                terminals = value
            elif key == "start":
                if len(value) != 1:
                    raise ParseError(f"line {lineno}: start takes one symbol", lineno)
                start = value[0]
            elif "|" in value:
                bar = value.index("|")
                open_accepting.append(OpenFamily(frozenset(value[:bar]), frozenset(value[bar + 1:])))
            else:
                accepting.append(frozenset(value))
            continue
        productions.extend(_parse_production(line, lineno))
    if start is None:
        raise ParseError("missing 'start:' line", 0)
    if nonterminals is None:
        nonterminals = list(dict.fromkeys([start] + [p.head for p in productions]))
    if terminals is None:
        nts = set(nonterminals)
        terminals = [s for s in dict.fromkeys(chain.from_iterable(p.body for p in productions))
                     if s not in nts]
    g = Mcfg(nonterminals, terminals, productions, start, accepting, open_accepting)
    validate(g)
    return g


def format_grammar(g: Mcfg) -> str:
    """Inverse of ``parse_grammar``; alternatives are grouped by head."""
    lines = [
        "nonterminals: " + " ".join(g.nonterminals),
        "terminals: " + " ".join(g.terminals),
        f"start: {g.start}",
    ]
    for head in dict.fromkeys(p.head for p in g.productions):
        alts = [" ".join(p.body) if p.body else "eps" for p in g.productions_of(head)]
        lines.append(f"{head} -> " + " | ".join(alts))
    for f in g.accepting:
        lines.append("accept: " + " ".join(_ordered(g, f)))
    for f in g.open_accepting:
        lines.append(f"accept: {' '.join(_ordered(g, f.core))} | {' '.join(_ordered(g, f.optional))}")
    return "\n".join(lines) + "\n"


def _ordered(g: Mcfg, nts) -> list:
    rank = {a: i for i, a in enumerate(g.nonterminals)}
    return sorted(nts, key=lambda a: (rank.get(a, len(rank)), a))


# -- validation -------------------------------------------------------------------

def _reachable(g: Mcfg, start: str) -> set:
    seen = {start}
    todo = [start]
    while todo:
        a = todo.pop()
        for p in g.productions_of(a):
            for s in p.body:
                if g.is_nonterminal(s) and s not in seen:
                    seen.add(s)
                    todo.append(s)
    return seen


def validate(g: Mcfg) -> list:
    """Structural errors raise ``InvalidGrammar``; warnings are returned."""
    errors, warnings = [], []
    nts, ts = set(g.nonterminals), set(g.terminals)
    for s in sorted(nts & ts):
        errors.append(f"symbol {s!r} is both a terminal and a nonterminal")
    for s in sorted(ts):
        if s == "eps":
            errors.append("'eps' is reserved and cannot be a terminal")
    if g.start not in nts:
        errors.append(f"start symbol {g.start!r} is not a nonterminal")
    for p in g.productions:
        if p.head not in nts:
            errors.append(f"production {p}: head is not a nonterminal")
        for s in p.body:
            if s not in nts and s not in ts:
                errors.append(f"production {p}: unknown symbol {s!r}")
    for f in g.accepting + tuple(f.universe for f in g.open_accepting):
        if not f:
            errors.append("accepting set is empty")
        for a in sorted(f - nts):
            errors.append(f"accepting set {{{' '.join(sorted(f))}}}: {a!r} is not a nonterminal")
    if errors:
        raise InvalidGrammar([Diagnostic("error", m) for m in errors])
    reach = _reachable(g, g.start)
    for a in g.nonterminals:
        if a not in reach:
            warnings.append(Diagnostic("warning", f"nonterminal {a} is unreachable from {g.start}"))
    for f in g.accepting:
        try:
            r_regex(g, _ordered(g, f)[0], f)
        except EmptyRoot:
            warnings.append(Diagnostic(
                "warning", f"accepting set {{{' '.join(_ordered(g, f))}}} has no covering cycle"))
    return warnings


# -- the Gamma alphabet and path automata ---------------------------------------------

@dataclass(frozen=True, order=True)
class GammaLetter:
    alpha: tuple
    B: str
    beta: tuple

    def __str__(self):
        def side(xs):
            return "".join(xs) if all(len(x) == 1 for x in xs) else " ".join(xs)
        return f"({side(self.alpha) or 'eps'},{self.B},{side(self.beta) or 'eps'})"


def _splits(body: tuple, g: Mcfg):
    for i, s in enumerate(body):
        if g.is_nonterminal(s):
            yield GammaLetter(body[:i], s, body[i + 1:])


def gamma_alphabet(g: Mcfg) -> set:
    """Triples ``(alpha, B, beta)`` with ``alpha B beta`` a right-hand side."""
    return {letter for p in g.productions for letter in _splits(p.body, g)}


@dataclass(frozen=True)
class PathAutomaton:
    states: frozenset
    alphabet: frozenset
    delta: dict = field(hash=False)
    initial: str

    def step(self, state: str, letter: GammaLetter):
        return self.delta.get((state, letter))


def path_automaton(g: Mcfg, A: str, F, within=None) -> PathAutomaton:
    """Automaton reading central paths from ``A`` that stay inside ``F``.

    ``within`` widens the state set beyond ``F``; open accepting sets use
    every nonterminal.
    """
    states = frozenset(F if within is None else within)
    if A not in states:
        raise ValueError(f"{A} is not in the accepting set")
    delta = {}
    for p in g.productions:
        if p.head not in states:
            continue
        for letter in _splits(p.body, g):
            if letter.B in states:
                delta[(p.head, letter)] = letter.B
    return PathAutomaton(states, frozenset(gamma_alphabet(g)), delta, A)


# -- regular expressions over Gamma -------------------------------------------------

@dataclass(frozen=True)
class RSym:
    letter: GammaLetter


@dataclass(frozen=True)
class REps:
    pass


@dataclass(frozen=True)
class RUnion:
    items: tuple


@dataclass(frozen=True)
class RConcat:
    items: tuple


@dataclass(frozen=True)
class RStar:
    body: object


R_EPS = REps()


def r_union(items):
    out = []
    for r in items:
        if r is None:
            continue
        for x in (r.items if isinstance(r, RUnion) else (r,)):
            if x not in out:
                out.append(x)
    if not out:
        return None
    return out[0] if len(out) == 1 else RUnion(tuple(out))


def r_concat(items):
    out = []
    for r in items:
        if r is None:
            return None
        out.extend(x for x in (r.items if isinstance(r, RConcat) else (r,)) if x != R_EPS)
    if not out:
        return R_EPS
    return out[0] if len(out) == 1 else RConcat(tuple(out))


def r_star(r):
    if r is None or r == R_EPS:
        return R_EPS
    if isinstance(r, RStar):
        return r
    return RStar(r)


def render_regex(r) -> str:
    if r is None:
        return "0"
    if isinstance(r, REps):
        return "eps"
    if isinstance(r, RSym):
        return str(r.letter)
    if isinstance(r, RUnion):
        return "(" + " + ".join(render_regex(x) for x in r.items) + ")"
    if isinstance(r, RConcat):
        return ".".join(render_regex(x) for x in r.items)
    return render_regex(r.body) + "*" if isinstance(r.body, (RSym, RUnion)) else f"({render_regex(r.body)})*"


def regex_words(r, max_len: int) -> set:
    """Words of ``r`` with at most ``max_len`` letters, as tuples."""
    if r is None:
        return set()
    if isinstance(r, REps):
        return {()}
    if isinstance(r, RSym):
        return {(r.letter,)} if max_len >= 1 else set()
    if isinstance(r, RUnion):
        return set().union(*(regex_words(x, max_len) for x in r.items))
    if isinstance(r, RConcat):
        acc = {()}
        for x in r.items:
            part = regex_words(x, max_len)
            acc = {u + v for u in acc for v in part if len(u) + len(v) <= max_len}
        return acc
    body = regex_words(r.body, max_len) - {()}
    acc = {()}
    frontier = {()}
    while frontier:
        frontier = {u + v for u in frontier for v in body if len(u) + len(v) <= max_len} - acc
        acc |= frontier
    return acc


_INIT, _FINAL = ("init",), ("final",)


def r_regex(g: Mcfg, A: str, F, within=None):
    """Regular root of the covering cycles of ``A`` in the automaton for ``F``.

    The root denotes the ``A -> A`` paths that visit every state of ``F`` and
    end at the first return to ``A`` after the last state was covered.  Its
    omega power is the set of accepted runs from ``A``.
    """
    F = frozenset(F)
    aut = path_automaton(g, A, F, within)
    edges = {}

    def add(p, q, r):
        edges[(p, q)] = r_union([edges.get((p, q)), r])

    start = (A, frozenset([A]) & F)
    add(_INIT, start, R_EPS)
    todo, seen = [start], {start}
    by_state = {}
    for (c, letter), d in aut.delta.items():
        by_state.setdefault(c, []).append((letter, d))
    while todo:
        node = todo.pop()
        c, visited = node
        for letter, d in sorted(by_state.get(c, ()), key=lambda x: x[0]):
            covered = visited | ({d} & F)
            if d == A and covered == F:
                add(node, _FINAL, RSym(letter))
                continue
            nxt = (d, covered)
            add(node, nxt, RSym(letter))
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    live = _co_reachable(edges, _FINAL)
    edges = {k: r for k, r in edges.items() if k[0] in live and k[1] in live}
    result = _eliminate(edges, seen & live)
    if result is None:
        raise EmptyRoot(f"no covering cycle for {A} in {{{' '.join(_ordered(g, F))}}}")
    return result


def _co_reachable(edges: dict, target) -> set:
    back = {}
    for p, q in edges:
        back.setdefault(q, []).append(p)
    seen, todo = {target}, [target]
    while todo:
        for p in back.get(todo.pop(), ()):
            if p not in seen:
                seen.add(p)
                todo.append(p)
    return seen


def _state_key(node):
    c, visited = node
    return (c, sorted(visited))


def _eliminate(edges: dict, states: set):
    states = set(states)
    while states:
        def cost(s):
            ins = sum(1 for (p, q) in edges if q == s and p != s)
            outs = sum(1 for (p, q) in edges if p == s and q != s)
            return (ins * outs, _state_key(s))
        s = min(states, key=cost)
        states.remove(s)
        loop = edges.pop((s, s), None)
        ins = [(p, r) for (p, q), r in edges.items() if q == s]
        outs = [(q, r) for (p, q), r in edges.items() if p == s]
        for p, _ in ins:
            del edges[(p, s)]
        for q, _ in outs:
            del edges[(s, q)]
        mid = r_star(loop)
        for p, r_in in ins:
            for q, r_out in outs:
                edges[(p, q)] = r_union([edges.get((p, q)), r_concat([r_in, mid, r_out])])
    return edges.get((_INIT, _FINAL))


# -- bar translation and the equation system ----------------------------------------

def _bar_word(symbols, var_of) -> Expr:
    parts = [Var(var_of[s]) if s in var_of else LetterE(s) for s in symbols]
    if not parts:
        return EPS_E
    out = parts[0]
    for p in parts[1:]:
        out = Dot(out, p)
    return out


def bar_translate(r, var_of: dict) -> Expr:
    """Pair expression for a regex over Gamma: letters become ``alpha >< beta``."""
    if r is None:
        raise EmptyRoot("the empty regular expression has no pair image")
    if isinstance(r, REps):
        return Times(EPS_E, EPS_E)
    if isinstance(r, RSym):
        return Times(_bar_word(r.letter.alpha, var_of), _bar_word(r.letter.beta, var_of))
    if isinstance(r, RStar):
        return StarP(bar_translate(r.body, var_of))
    parts = [bar_translate(x, var_of) for x in r.items]
    combine = PlusP if isinstance(r, RUnion) else DotP
    out = parts[0]
    for p in parts[1:]:
        out = combine(out, p)
    return out


@dataclass(frozen=True)
class EquationSystem:
    equations: dict = field(hash=False)
    start: str
    var_of: dict = field(hash=False, default_factory=dict)

    def lines(self) -> list:
        return [f"{v} = {render(rhs)}" for v, rhs in self.equations.items()]

    def __str__(self):
        return "\n".join(self.lines())


def variable_names(g: Mcfg) -> dict:
    taken = set(g.terminals)
    out = {}
    for a in g.nonterminals:
        base = "X_" + re.sub(r"[^A-Za-z0-9_']", "_", a)
        name, k = base, 1
        while name in taken:
            k += 1
            name = f"{base}_{k}"
        taken.add(name)
        out[a] = name
    return out


def _sum(items, plus) -> Expr:
    out = items[0]
    for x in items[1:]:
        out = plus(out, x)
    return out


def build_equation_system(g: Mcfg) -> EquationSystem:
    """``X_A = sum of bar(u) over A -> u, plus (bar r_{A,F})^w over F containing A``.

    A production summand ``alpha X_A beta`` is left out when every production
    of ``A`` mentions ``A`` and some omega summand of ``A`` exists: every
    finite unfolding of such summands already lies in the omega summand.
    """
    validate(g)
    var_of = variable_names(g)
    equations = {}
    for a in g.nonterminals:
        omegas = []
        for f in g.accepting:
            if a not in f:
                continue
            try:
                omegas.append(OmegaP(bar_translate(r_regex(g, a, f), var_of)))
            except EmptyRoot:
                pass
        for fam in g.open_accepting:
            if a not in fam.universe:
                continue
            try:
                root = r_regex(g, a, fam.core | {a}, within=fam.universe)
                omegas.append(OmegaP(bar_translate(root, var_of)))
            except EmptyRoot:
                pass
        prods = g.productions_of(a)
        recursive = bool(prods) and all(a in p.body for p in prods)
        summands = [] if (recursive and omegas) else [_bar_word(p.body, var_of) for p in prods]
        summands = list(dict.fromkeys(summands + omegas))
        if not summands:
            summands = [EMPTY_E]
        equations[var_of[a]] = _sum(summands, Plus)
    return EquationSystem(equations, var_of[g.start], var_of)


# -- finite derivations -------------------------------------------------------------

def enumerate_finite_derivations(g: Mcfg, A: str, size_bound: int):
    """Frontier words of finite complete ``A``-trees with at most ``size_bound`` nodes.

    Every tree node counts, including terminal leaves and the ``eps`` leaf of
    an empty production.
    """
    from .evaluate import LangApprox
    best = {a: {} for a in g.nonterminals}  # word -> fewest nodes
    changed = True
    while changed:
        changed = False
        for p in g.productions:
            budget = size_bound - 1
            acc = {(): 0 if p.body else 1}
            for s in p.body:
                if g.is_nonterminal(s):
                    options = best[s].items()
                else:
                    options = [((s,), 1)]
                nxt = {}
                for u, cu in acc.items():
                    for v, cv in options:
                        c = cu + cv
                        if c <= budget and c < nxt.get(u + v, budget + 1):
                            nxt[u + v] = c
                acc = nxt
            for w, c in acc.items():
                total = c + 1
                if total <= size_bound and total < best[p.head].get(w, size_bound + 1):
                    best[p.head][w] = total
                    changed = True
    return LangApprox.words(W.cat(*(W.Letter(x) for x in w)) for w in best[A])
