"""Bounded least-fixed-point semantics over finite sets of word terms.

Every language is under-approximated by the finite set of its members whose
canonical term fits a budget: the *weight* (one per letter plus
``OMEGA_WEIGHT`` per omega or reverse omega node) must be below
``Bounds.mu_iterations`` and the node count must not exceed
``Bounds.max_term_size``.  Each ``mu`` is iterated from the empty set until
nothing new fits the budget, so the result depends on the denoted language
and the bounds rather than on how the expression is nested.  Star and the
omega power additionally cap the number of pair factors they multiply.

For ``mu x.(a x + eps)`` the budget ``mu_iterations = k`` yields the words of
length below ``k``, which is exactly the ``k``-th Kleene approximant.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import chain
from typing import Mapping

from . import words as W
from .errors import UnboundVariable
from .expr import (
    Dot, DotP, EmptyE, EpsE, Expr, LetterE, Mu, OmegaP, OmegaT, P, Plus, PlusP,
    StarP, T, Times, Var, free_vars, substitute,
)


@dataclass(frozen=True)
class Bounds:
    """Budget for the finite approximations.

    A word is kept when its weight is below ``mu_iterations`` and it has at
    most ``max_term_size`` nodes; a pair when its total weight is below
    ``mu_iterations`` and each side fits the node cap.  ``mu_iterations = 0``
    keeps nothing.  ``star_unroll`` caps the pair factors of a star word,
    ``omega_prefix_len`` and ``omega_period_len`` those of an omega power.
    """

    mu_iterations: int = 4
    star_unroll: int = 4
    omega_prefix_len: int = 4
    omega_period_len: int = 4
    max_term_size: int = 60

    def __post_init__(self):
        for name in ("mu_iterations", "star_unroll", "omega_prefix_len", "max_term_size"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.omega_period_len < 1:
            raise ValueError("omega_period_len must be at least 1")
        if self.max_term_size < 1:
            raise ValueError("max_term_size must be at least 1")

    def keeps(self, w: W.Word) -> bool:
        return w.weight < self.mu_iterations and w.size <= self.max_term_size

    def keeps_pair(self, p: W.Pair) -> bool:
        return (W.pair_weight(p) < self.mu_iterations
                and p.left.size <= self.max_term_size
                and p.right.size <= self.max_term_size)


@dataclass(frozen=True)
class LangApprox:
    """Finite under-approximation of a word language (T) or pair language (P)."""

    kind: str
    elements: frozenset

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, item):
        return item in self.elements

    def __le__(self, other):
        return self.kind == other.kind and self.elements <= other.elements

    def lines(self) -> list:
        """Rendered members, length-lexicographically sorted."""
        if self.kind == T:
            texts = [w.text for w in self.elements]
        else:
            texts = [W.render_pair(p) for p in self.elements]
        return sorted(texts, key=lambda s: (len(s), s))

    @classmethod
    def words(cls, items=()):
        return cls(T, frozenset(items))

    @classmethod
    def pairs(cls, items=()):
        return cls(P, frozenset(items))


# -- operations on finite approximations -----------------------------------------
#
# Weight is additive under concatenation unless boundary parts are absorbed
# into an omega power.  Indexed items are bucketed by weight so a scan stops
# once nothing can fit, and the absorbing partners are found through hash
# indexes on the boundary parts.

def _add(index: dict, key, item) -> None:
    if key is not None:
        index.setdefault(key, []).append(item)


def _lookup(pairs):
    out = []
    for index, key in pairs:
        if key is not None:
            out.extend(index.get(key, ()))
    return out


def _light(buckets: dict, bound: int):
    for w in range(bound):
        yield from buckets.get(w, ())


class _Factors:
    """Right-hand factors of pair products; grows with ``add``."""

    def __init__(self, ps=()):
        self.buckets = {}
        self.by_omega_left = {}
        self.by_first_left = {}
        self.by_last_right = {}
        self.by_rev_right = {}
        for p in ps:
            self.add(p)

    def add(self, p: W.Pair) -> None:
        self.buckets.setdefault(W.pair_weight(p), []).append(p)
        _add(self.by_omega_left, W.omega_hook(p.left), p)
        _add(self.by_first_left, W.first_part(p.left), p)
        _add(self.by_last_right, W.last_part(p.right), p)
        _add(self.by_rev_right, W.rev_hook(p.right), p)

    def products(self, x: W.Pair, b: Bounds):
        """Every ``pair_product(x, p)`` kept by ``b``."""
        special = _lookup((
            (self.by_omega_left, W.last_part(x.left)),
            (self.by_first_left, W.rev_hook(x.left)),
            (self.by_last_right, W.omega_hook(x.right)),
            (self.by_rev_right, W.first_part(x.right)),
        ))
        for p in special:
            r = W.pair_product(x, p)
            if b.keeps_pair(r):
                yield r
        # Without absorption the weight is the sum, so only the size can fail.
        cap = b.max_term_size
        xl, xr = x
        cat2 = W.cat2
        for w in range(b.mu_iterations - xl.weight - xr.weight):
            for pl, pr in self.buckets.get(w, ()):
                left, right = cat2(xl, pl), cat2(pr, xr)
                if left.size <= cap and right.size <= cap:
                    yield W.Pair(left, right)


class _Prefixes:
    """Prefix pairs ``(x, y)`` to wrap around omega cores as ``x c y``."""

    def __init__(self, ps=()):
        self.buckets = {}
        self.by_last_left = {}
        self.by_rev_left = {}
        self.by_first_right = {}
        self.by_omega_right = {}
        for p in ps:
            self.add(p)

    def add(self, p: W.Pair) -> None:
        self.buckets.setdefault(W.pair_weight(p), []).append(p)
        _add(self.by_last_left, W.last_part(p.left), p)
        _add(self.by_rev_left, W.rev_hook(p.left), p)
        _add(self.by_first_right, W.first_part(p.right), p)
        _add(self.by_omega_right, W.omega_hook(p.right), p)

    def wrap(self, c: W.Word, b: Bounds, out: set) -> None:
        special = _lookup((
            (self.by_last_left, W.omega_hook(c)),
            (self.by_rev_left, W.first_part(c)),
            (self.by_first_right, W.rev_hook(c)),
            (self.by_omega_right, W.last_part(c)),
        ))
        for p in chain(special, _light(self.buckets, b.mu_iterations - c.weight)):
            w = W.cat(p.left, c, p.right)
            if b.keeps(w):
                out.add(w)


class _Closure:
    """Products of at most ``depth`` members of a growing pair set.

    Each product remembers the fewest factors it needs.  ``update`` takes a
    superset of the previous input and only expands products whose factor
    count improved or that meet a new member; a smaller input starts over.
    """

    def __init__(self, depth: int):
        self.depth = depth
        self.reset()

    def reset(self):
        self.input = frozenset()
        self.level = {}
        self.factors = _Factors()

    def update(self, ps: frozenset, b: Bounds) -> dict:
        """Feed the current input; returns ``{product: previous level}`` for improved products."""
        if not self.input <= ps:
            self.reset()
        fresh = [p for p in ps - self.input if b.keeps_pair(p)]
        self.input = ps
        changed = {}
        if not self.depth or not fresh:
            return changed
        level, depth = self.level, self.depth
        queues = [[] for _ in range(depth + 1)]

        def improve(x, k):
            old = level.get(x, depth + 1)
            if k < old:
                level[x] = k
                changed.setdefault(x, old)
                queues[k].append(x)

        old_items = [(x, k) for x, k in level.items() if k < depth]
        new_factors = [p for p in fresh if p != W.EPS_PAIR]
        for p in new_factors:
            self.factors.add(p)
        for p in fresh:
            improve(p, 1)
        if new_factors:
            small = _Factors(new_factors)
            for x, k in old_items:
                for r in small.products(x, b):
                    improve(r, k + 1)
        for k in range(1, depth):
            for x in queues[k]:
                if level[x] != k:
                    continue
                for r in self.factors.products(x, b):
                    improve(r, k + 1)
        return changed

    def new_within(self, changed: dict, k: int) -> list:
        """Products that need at most ``k`` factors now but did not before."""
        level = self.level
        return [x for x, old in changed.items() if level[x] <= k < old]


class _StarState:
    def __init__(self, b: Bounds):
        self.closure = _Closure(b.star_unroll)
        self.result = set()

    def update(self, ps: frozenset, b: Bounds) -> frozenset:
        if not self.closure.input <= ps:
            self.result = set()
        changed = self.closure.update(ps, b)
        if b.keeps_pair(W.EPS_PAIR):
            self.result.add(W.EPS_PAIR)
        self.result.update(changed)
        return frozenset(self.result)


class _OmegaState:
    def __init__(self, b: Bounds):
        self.closure = _Closure(max(b.omega_period_len, b.omega_prefix_len))
        self.start()

    def start(self):
        self.cores = []
        self.core_set = set()
        self.prefixes = _Prefixes([W.EPS_PAIR])
        self.result = set()

    def update(self, ps: frozenset, b: Bounds) -> frozenset:
        if not self.closure.input <= ps:
            self.start()
        changed = self.closure.update(ps, b)
        new_cores = []
        for q in self.closure.new_within(changed, b.omega_period_len):
            c = W.cat(W.omega(q.left), W.rev_omega(q.right))
            if c.weight < b.mu_iterations and c not in self.core_set:
                self.core_set.add(c)
                new_cores.append(c)
        new_prefixes = [p for p in self.closure.new_within(changed, b.omega_prefix_len)
                        if p != W.EPS_PAIR]
        if new_prefixes:
            fresh = _Prefixes(new_prefixes)
            for c in self.cores:
                fresh.wrap(c, b, self.result)
        for p in new_prefixes:
            self.prefixes.add(p)
        for c in new_cores:
            self.prefixes.wrap(c, b, self.result)
        self.cores.extend(new_cores)
        return frozenset(self.result)


def union(xs, ys):
    return xs | ys


def concat(xs, ys, b: Bounds):
    table = _Factors(W.Pair(v, W.EPS) for v in ys if b.keeps(v))
    out = set()
    for u in xs:
        for r in table.products(W.Pair(u, W.EPS), b):
            out.add(r.left)
    return frozenset(out)


def times(xs, ys, b: Bounds):
    buckets = {}
    for v in ys:
        if v.size <= b.max_term_size:
            buckets.setdefault(v.weight, []).append(v)
    out = set()
    for u in xs:
        if u.size <= b.max_term_size:
            for v in _light(buckets, b.mu_iterations - u.weight):
                out.add(W.Pair(u, v))
    return frozenset(out)


def pair_concat(ps, qs, b: Bounds):
    table = _Factors(q for q in qs if b.keeps_pair(q))
    out = set()
    for p in ps:
        out.update(table.products(p, b))
    return frozenset(out)


def star(ps, b: Bounds):
    """Products of at most ``star_unroll`` members, and the unit pair."""
    return _StarState(b).update(frozenset(ps), b)


def omega_power(ps, b: Bounds):
    """Eventually periodic omega products ``prefix . period^w`` of members of ``ps``."""
    return _OmegaState(b).update(frozenset(ps), b)


# -- expressions ---------------------------------------------------------------

_EPS_ONLY = frozenset([W.EPS])


def _eval(e: Expr, env: Mapping[str, frozenset], b: Bounds, ctx: dict) -> frozenset:
    if isinstance(e, LetterE):
        w = W.Letter(e.name)
        return frozenset([w]) if b.keeps(w) else frozenset()
    if isinstance(e, EpsE):
        return _EPS_ONLY if b.keeps(W.EPS) else frozenset()
    if isinstance(e, EmptyE):
        return frozenset()
    if isinstance(e, Var):
        try:
            return env[e.name]
        except KeyError:
            raise UnboundVariable(f"variable {e.name!r} has no value") from None
    if isinstance(e, (Plus, PlusP)):
        return _eval(e.left, env, b, ctx) | _eval(e.right, env, b, ctx)
    if isinstance(e, (Dot, Times, DotP)):
        left = _eval(e.left, env, b, ctx)
        if not left:
            return frozenset()
        op = concat if isinstance(e, Dot) else times if isinstance(e, Times) else pair_concat
        return op(left, _eval(e.right, env, b, ctx), b)
    if isinstance(e, StarP):
        body = _eval(e.body, env, b, ctx)
        state = ctx.get(id(e)) or ctx.setdefault(id(e), _StarState(b))
        return state.update(body, b)
    if isinstance(e, (OmegaP, OmegaT)):
        body = _eval(e.body, env, b, ctx)
        if isinstance(e, OmegaT):
            body = times(body, _EPS_ONLY, b)
        state = ctx.get(id(e)) or ctx.setdefault(id(e), _OmegaState(b))
        return state.update(body, b)
    if isinstance(e, Mu):
        current = frozenset()
        while True:
            nxt = _eval(e.body, {**env, e.var: current}, b, ctx)
            if nxt == current:
                return current
            current = nxt
    raise TypeError(f"not an expression: {e!r}")


def eval_expr(e: Expr, env: Mapping[str, LangApprox] | None = None,
              bounds: Bounds | None = None) -> LangApprox:
    """Bounded under-approximation of the language of ``e``."""
    bounds = bounds or Bounds()
    raw_env = {name: frozenset(lang.elements) for name, lang in (env or {}).items()}
    missing = free_vars(e) - raw_env.keys()
    if missing:
        raise UnboundVariable(f"no value for {', '.join(sorted(missing))}")
    return LangApprox(e.sort, _eval(e, raw_env, bounds, {}))


def eval_system(system, bounds: Bounds | None = None) -> dict:
    """Least solution of an equation system under ``bounds``.

    Strongly connected groups of variables are solved in dependency order;
    inside a group an equation is re-evaluated only after one of its
    variables grew.  Every operation is monotone on a finite lattice, so this
    reaches the same least fixed point as simultaneous iteration from the
    empty tuple.
    """
    bounds = bounds or Bounds()
    eqs = system.equations
    deps = {v: free_vars(rhs) & eqs.keys() for v, rhs in eqs.items()}
    users = {v: set() for v in eqs}
    for v, ds in deps.items():
        for d in ds:
            users[d].add(v)
    current = {v: frozenset() for v in eqs}
    ctx = {}
    for group in _components(eqs, deps):
        todo = list(group)
        queued = set(group)
        while todo:
            v = todo.pop(0)
            queued.discard(v)
            value = _eval(eqs[v], current, bounds, ctx)
            if value == current[v]:
                continue
            current[v] = value
            for u in sorted(users[v] & group):
                if u not in queued:
                    queued.add(u)
                    todo.append(u)
    return {v: LangApprox(T, s) for v, s in current.items()}


def _components(eqs, deps) -> list:
    """Strongly connected components, dependencies first (Tarjan, iterative)."""
    index, low, on_stack, stack, out = {}, {}, set(), [], []
    counter = 0
    for root in eqs:
        if root in index:
            continue
        work = [(root, iter(sorted(deps[root])))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(deps[w]))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                group = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    group.add(w)
                    if w == v:
                        break
                out.append(group)
    return out


def gaussian_eliminate(system, target: str) -> Expr:
    """Closed expression for ``target`` in the least solution of ``system``.

    Variables other than ``target`` are eliminated in ascending name order:
    ``y = rhs`` becomes ``y = mu y.rhs`` (plain ``rhs`` when ``y`` does not
    occur in it) and is substituted into every remaining equation.
    """
    if target not in system.equations:
        raise KeyError(target)
    eqs = dict(system.equations)
    for y in sorted(v for v in eqs if v != target):
        rhs = eqs.pop(y)
        solved = Mu(y, rhs) if y in free_vars(rhs) else rhs
        for v in eqs:
            if y in free_vars(eqs[v]):
                eqs[v] = substitute(eqs[v], y, solved)
    rhs = eqs[target]
    return Mu(target, rhs) if target in free_vars(rhs) else rhs
