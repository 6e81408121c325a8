"""Deciding whether a closed expression denotes well-ordered words only.

The pipeline runs in three linear-ish passes over the syntax tree:

1. ``eliminate_empty`` computes which subexpressions denote the empty set
   (a least fixed point of Horn clauses) and removes them.
2. ``collapse_epsilon`` replaces every maximal sort-T subexpression whose
   symbol set is empty, i.e. which denotes ``{eps}``, by ``eps``.
3. ``decide`` answers ``WellOrdered`` iff every ``t1 >< t2`` left has ``t2``
   equal to the constant ``eps``.

Every pass works on a flattened copy of the tree, so inputs with millions of
nodes are handled without recursion.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import NotClosed, PreconditionViolated, SortMismatch
from .expr import (
    EMPTY_E, EPS_E, Dot, DotP, EmptyE, EpsE, Expr, LetterE, Mu, OmegaP, OmegaT,
    Plus, PlusP, StarP, T, Times, Var,
)

_BINARY = (Plus, Dot, Times, PlusP, DotP)
_UNARY = (Mu, OmegaP, OmegaT, StarP)
_FIELDS = {Plus: ("left", "right"), Dot: ("left", "right"), Times: ("left", "right"),
           PlusP: ("left", "right"), DotP: ("left", "right"),
           Mu: ("body",), OmegaP: ("body",), OmegaT: ("body",), StarP: ("body",)}
_NEVER = 1 << 62


class Verdict(enum.Enum):
    WELL_ORDERED = "WellOrdered"
    NOT_WELL_ORDERED = "NotWellOrdered"
    EMPTY_LANGUAGE = "EmptyLanguage"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Decision:
    verdict: Verdict
    path: tuple = ()
    witness: Expr | None = None

    def describe(self) -> str:
        """The verdict, plus the offending pair and its path when there is one."""
        if self.witness is None:
            return str(self.verdict)
        where = "/".join(self.path) or "<root>"
        return f"{self.verdict}\n{where}: {self.witness}"


class _Flat:
    """Pre-order arrays for a tree: node objects, child indices and binders.

    ``binder[i]`` is the index of the ``Mu`` binding the variable at ``i``.
    """

    def __init__(self, e: Expr, allow_free: bool = False):
        nodes, kids, binder = [], [], []
        scope = {}
        stack = [(e, -1, 0)]
        # Entries with a node of None pop a binder from the scope.
        while stack:
            node, parent, slot = stack.pop()
            if node is None:
                scope[parent].pop()
                continue
            i = len(nodes)
            nodes.append(node)
            kids.append([])
            binder.append(-1)
            if parent >= 0:
                kids[parent].append(i)
            cls = type(node)
            if cls is Var:
                bound = scope.get(node.name)
                if bound:
                    binder[i] = bound[-1]
                elif not allow_free:
                    raise NotClosed(f"free variable: {node.name}")
            elif cls is Mu:
                scope.setdefault(node.var, []).append(i)
                stack.append((None, node.var, 0))
                stack.append((node.body, i, 0))
            elif cls in _UNARY:
                stack.append((node.body, i, 0))
            elif cls in _BINARY:
                stack.append((node.right, i, 1))
                stack.append((node.left, i, 0))
        self.nodes = nodes
        self.kids = kids
        self.binder = binder


def _nonempty(flat: _Flat) -> list:
    """Which nodes denote a nonempty language, by unit propagation."""
    nodes, kids, binder = flat.nodes, flat.kids, flat.binder
    n = len(nodes)
    need = [0] * n
    parent = [-1] * n
    uses = {}
    for i in range(n):
        cls = type(nodes[i])
        for k in kids[i]:
            parent[k] = i
        if cls in (Plus, PlusP):
            need[i] = 1
        elif cls in (Dot, Times, DotP):
            need[i] = 2
        elif cls in (Mu, OmegaP, OmegaT):
            need[i] = 1
        elif cls is Var:
            need[i] = 1
            uses.setdefault(binder[i], []).append(i)
        elif cls is EmptyE:
            need[i] = _NEVER
    ok = [False] * n
    work = [i for i in range(n) if need[i] == 0]
    for i in work:
        ok[i] = True
    while work:
        i = work.pop()
        waiting = [parent[i]] if parent[i] >= 0 else []
        waiting += uses.get(i, ())
        for j in waiting:
            need[j] -= 1
            if need[j] == 0:
                ok[j] = True
                work.append(j)
    return ok


def _build(flat: _Flat, make) -> Expr:
    """Bottom-up rebuild; ``make(i, new_kids)`` returns the node for ``i``."""
    nodes, kids = flat.nodes, flat.kids
    out = [None] * len(nodes)
    for i in range(len(nodes) - 1, -1, -1):
        out[i] = make(i, [out[k] for k in kids[i]])
    return out[0]


def _same(node: Expr, new_kids: list) -> Expr:
    cls = type(node)
    fields = _FIELDS.get(cls, ())
    if all(getattr(node, f) is k for f, k in zip(fields, new_kids)):
        return node
    if cls is Mu:
        return Mu(node.var, new_kids[0])
    return cls(*new_kids)


def _check_sort(e: Expr) -> None:
    if e.sort != T:
        raise SortMismatch("expected an expression of sort T")


def eliminate_empty(e: Expr) -> Expr:
    """An equivalent expression without empty subexpressions, or ``EMPTY_E``."""
    _check_sort(e)
    flat = _Flat(e)
    ok = _nonempty(flat)
    if not ok[0]:
        return EMPTY_E
    nodes = flat.nodes

    def make(i, new):
        if not ok[i]:
            return None
        node = nodes[i]
        cls = type(node)
        if cls in (Plus, PlusP):
            left, right = new
            if left is None:
                return right
            if right is None:
                return left
        elif cls is StarP and new[0] is None:
            return Times(EPS_E, EPS_E)
        return _same(node, new)

    return _build(flat, make)


def _symbol_sets(flat: _Flat) -> list:
    """Per node: True when its symbol set is empty.

    Sets are merged small into large and the child sets are consumed, so the
    total work is ``O(n log n)`` set operations.
    """
    nodes, kids = flat.nodes, flat.kids
    n = len(nodes)
    sets = [None] * n
    empty = [False] * n
    for i in range(n - 1, -1, -1):
        node = nodes[i]
        cls = type(node)
        if cls is LetterE:
            s = {("letter", node.name)}
        elif cls is Var:
            s = {("var", node.name)}
        elif cls is EpsE:
            s = set()
        elif cls is EmptyE:
            raise PreconditionViolated("the expression contains the empty language")
        else:
            ks = kids[i]
            s = sets[ks[0]]
            sets[ks[0]] = None
            if len(ks) == 2:
                t = sets[ks[1]]
                sets[ks[1]] = None
                if len(t) > len(s):
                    s, t = t, s
                s |= t
            if cls is Mu:
                s.discard(("var", node.var))
        sets[i] = s
        empty[i] = not s
    empty.append(sets[0])
    return empty


def symbols(e: Expr) -> frozenset:
    """Letters and free variables occurring in ``e`` once ``mu`` binders are removed."""
    result = _symbol_sets(_Flat(e, allow_free=True))[-1]
    return frozenset(name for _, name in result)


def collapse_epsilon(e: Expr) -> Expr:
    """Replace every maximal sort-T subexpression denoting ``{eps}`` by ``eps``.

    ``e`` must not contain the empty language.
    """
    flat = _Flat(e, allow_free=True)
    eps_only = _symbol_sets(flat)
    nodes = flat.nodes

    def make(i, new):
        node = nodes[i]
        if eps_only[i] and node.sort == T:
            return EPS_E
        return _same(node, new)

    return _build(flat, make)


def _offending_pair(e: Expr):
    """Path to the first ``t1 >< t2`` in pre-order whose ``t2`` is not ``eps``."""
    # Each entry is (node, field name, index of the parent entry).
    seen = []
    stack = [(e, None, -1)]
    while stack:
        entry = stack.pop()
        node, _, up = entry
        here = len(seen)
        seen.append(entry)
        cls = type(node)
        if cls is Times and type(node.right) is not EpsE:
            path = []
            while up >= 0:
                path.append(entry[1])
                entry = seen[up]
                up = entry[2]
            return tuple(reversed(path)), node
        for f in reversed(_FIELDS.get(cls, ())):
            stack.append((getattr(node, f), f, here))
    return None


def decide(e: Expr, strict: bool = False) -> Decision:
    """Whether every word denoted by the closed sort-T expression is well-ordered.

    With ``strict`` the empty language is reported as well-ordered.
    """
    reduced = eliminate_empty(e)
    if reduced is EMPTY_E:
        verdict = Verdict.WELL_ORDERED if strict else Verdict.EMPTY_LANGUAGE
        return Decision(verdict)
    found = _offending_pair(collapse_epsilon(reduced))
    if found is None:
        return Decision(Verdict.WELL_ORDERED)
    path, node = found
    return Decision(Verdict.NOT_WELL_ORDERED, path, node)
