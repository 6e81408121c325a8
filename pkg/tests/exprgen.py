"""Random closed expressions, as a seeded generator and as hypothesis strategies."""

import random

from hypothesis import strategies as st

from mcfl.expr import (
    EMPTY_E, EPS_E, Dot, DotP, LetterE, Mu, OmegaP, Plus, PlusP, StarP, Times, Var,
)

LETTERS = "ab"


def random_t(rng: random.Random, depth: int, scope=()) -> object:
    """A sort-T expression of depth at most ``depth`` whose free variables lie in ``scope``."""
    if depth <= 1 or rng.random() < 0.08:
        r = rng.random()
        if scope and r < 0.3:
            return Var(rng.choice(scope))
        if r < 0.4:
            return EPS_E
        if r < 0.43:
            return EMPTY_E
        return LetterE(rng.choice(LETTERS))
    op = rng.choice(("plus", "dot", "mu", "omega", "omega"))
    if op == "plus":
        return Plus(random_t(rng, depth - 1, scope), random_t(rng, depth - 1, scope))
    if op == "dot":
        return Dot(random_t(rng, depth - 1, scope), random_t(rng, depth - 1, scope))
    if op == "mu":
        x = f"x{len(scope)}"
        return Mu(x, random_t(rng, depth - 1, scope + (x,)))
    return OmegaP(random_p(rng, depth - 1, scope))


def random_p(rng: random.Random, depth: int, scope=()) -> object:
    if depth <= 2 or rng.random() < 0.3:
        left = random_t(rng, max(depth - 1, 1), scope)
        # Bias the right side toward eps so both verdicts are common.
        right = EPS_E if rng.random() < 0.6 else random_t(rng, max(depth - 1, 1), scope)
        return Times(left, right)
    op = rng.choice(("plus", "dot", "star"))
    if op == "plus":
        return PlusP(random_p(rng, depth - 1, scope), random_p(rng, depth - 1, scope))
    if op == "dot":
        return DotP(random_p(rng, depth - 1, scope), random_p(rng, depth - 1, scope))
    return StarP(random_p(rng, depth - 1, scope))


def random_corpus(count: int, depth: int, seed: int = 0) -> list:
    rng = random.Random(seed)
    return [random_t(rng, rng.randint(3, depth)) for _ in range(count)]


def closed_exprs(max_depth: int = 5):
    """Hypothesis strategy for closed sort-T expressions."""
    return st.builds(
        lambda seed, depth: random_t(random.Random(seed), depth),
        st.integers(0, 2**32 - 1),
        st.integers(1, max_depth),
    )
