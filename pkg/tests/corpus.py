"""Shared expression fixtures for the test suite."""

from mcfl.evaluate import Bounds

T_A = "(mu y.(a + eps + (y >< eps)^w))"
T_B = "(mu z.(b + eps + (eps >< z)^w))"
T_S = f"mu s.(({T_A} + {T_B}).s + eps)"
WELL_ORDERED_UNIVERSE = "mu x.((x >< eps)^w + a + b + eps)"
SCATTERED_UNIVERSE = "mu x.((x >< x)^w + a + b + eps)"

ROUNDTRIP = [
    WELL_ORDERED_UNIVERSE,
    SCATTERED_UNIVERSE,
    T_A,
    T_B,
    T_S,
    "a.b + eps",
    "mu x.(a.x + b)",
    "((a >< b)^*)^w",
    "((a >< eps).(eps >< b))^w . a",
    "(mu x.(a.x + eps) >< b)^w",
    "mu x.(a + (x >< x.b)^w)",
    "((mu x.x >< mu x.x)^*)^w + a.(mu x.x)",
]

WITNESS_BOUNDS = Bounds(9, 4, 4, 4, 60)

# Each entry is (expression, bounds) with a non-well-ordered word at those bounds.
NOT_WELL_ORDERED = [
    ("(a >< b)^w", WITNESS_BOUNDS),
    ("(eps >< a)^w", WITNESS_BOUNDS),
    (SCATTERED_UNIVERSE, Bounds(6, 4, 4, 4, 60)),
    (T_B, WITNESS_BOUNDS),
    (T_S, WITNESS_BOUNDS),
    ("((eps >< a)^*)^w", WITNESS_BOUNDS),
    ("((a >< eps).(eps >< b))^w", WITNESS_BOUNDS),
    ("(a >< (b + eps))^w", WITNESS_BOUNDS),
    ("((a + b) >< a)^w", WITNESS_BOUNDS),
    ("a.(eps >< b)^w.a", WITNESS_BOUNDS),
    ("mu x.(a + (eps >< x)^w)", WITNESS_BOUNDS),
    ("mu x.(a.x + (eps >< b)^w)", WITNESS_BOUNDS),
    ("((a >< eps)^* . (eps >< b))^w", WITNESS_BOUNDS),
    ("(mu x.(a.x + eps) >< b)^w", WITNESS_BOUNDS),
    ("(a >< mu x.(b.x + b))^w", WITNESS_BOUNDS),
    ("(a^w >< b)^w", Bounds(12, 4, 4, 4, 60)),
    ("(eps >< a^w)^w", WITNESS_BOUNDS),
    ("mu x.(a + ((x >< eps) + (eps >< x))^w)", WITNESS_BOUNDS),
    ("(a >< eps)^w + (eps >< b)^w", WITNESS_BOUNDS),
    ("mu x.(eps + (eps >< a.x)^w)", WITNESS_BOUNDS),
    ("(eps >< (eps + a))^w", WITNESS_BOUNDS),
    ("((eps >< a)^* . (b >< eps))^w", WITNESS_BOUNDS),
    ("mu y.(a.y + (b >< a)^w)", WITNESS_BOUNDS),
    ("((eps >< a) + (eps >< eps))^w", WITNESS_BOUNDS),
    ("(((eps >< a)^*)^w >< eps)^w", WITNESS_BOUNDS),
    ("(eps >< (eps >< b)^w)^w", WITNESS_BOUNDS),
    ("a.b.(eps >< a.b)^w", WITNESS_BOUNDS),
    ("((a.(mu x.x) + b) >< b)^w", WITNESS_BOUNDS),
]

MU_GRID = (2, 4, 8)
CAP_GRID = (20, 60, 200)


def grid():
    """The 3 x 3 bounds grid; the pair-factor caps follow the weight budget."""
    return [Bounds(mu, mu, mu, mu, cap) for mu in MU_GRID for cap in CAP_GRID]
