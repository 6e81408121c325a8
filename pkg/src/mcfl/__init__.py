"""Muller context-free grammars and fixed-point expressions over scattered words."""

from .compile import PairGrammar, compile, substitute_language
from .decide import Decision, Verdict, collapse_epsilon, decide, eliminate_empty, symbols
from .errors import (
    AlphabetClash, EmptyRoot, InvalidGrammar, McflError, NotClosed, NotWellOrderedShape,
    ParseError, PreconditionViolated, SortError, SortMismatch, UnboundVariable, UnknownLetter,
)
from .evaluate import Bounds, LangApprox, eval_expr, eval_system, gaussian_eliminate
from .expr import embed_w_to_s, free_vars, is_closed, parse, render, substitute, to_w
from .grammar import (
    EquationSystem, Mcfg, OpenFamily, Production, build_equation_system,
    enumerate_finite_derivations, format_grammar, parse_grammar, r_regex, validate,
)
from .words import (
    EPS, Cat, Eps, Letter, OmegaPow, Pair, RevOmegaPow, canonicalize, cat, is_well_ordered,
    pair_omega, pair_product, parse_word, rank_bound,
)

__all__ = [
    "AlphabetClash", "Bounds", "build_equation_system", "canonicalize", "Cat", "cat",
    "collapse_epsilon", "compile", "decide", "Decision", "eliminate_empty", "embed_w_to_s",
    "EmptyRoot", "enumerate_finite_derivations", "EPS", "Eps", "EquationSystem",
    "eval_expr", "eval_system", "format_grammar", "free_vars", "gaussian_eliminate",
    "InvalidGrammar", "is_closed", "is_well_ordered", "LangApprox", "Letter", "Mcfg",
    "McflError", "NotClosed", "NotWellOrderedShape", "OmegaPow", "OpenFamily", "Pair",
    "pair_omega", "pair_product", "PairGrammar", "parse", "parse_grammar", "parse_word",
    "ParseError", "PreconditionViolated", "Production", "r_regex", "rank_bound", "render",
    "RevOmegaPow", "SortError", "SortMismatch", "substitute", "substitute_language",
    "symbols", "to_w", "UnboundVariable", "UnknownLetter", "validate", "Verdict",
]
