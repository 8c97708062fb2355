"""Reversible Kleene lattices: terms, axioms, derivations and a finite-language oracle."""

from .rewrite import (
    AXIOMS, Ax, CondAx, Derivation, Refl, Statement, Sym, Trans, check,
    format_script, parse_script, search,
)
from .semantics import (
    Interpretation, OracleConfig, Verdict, equiv_bounded, evaluate, leq_bounded,
    refute,
)
from .syntax import Expr, Family, ParseError, VarId, check_family, parse, to_text

__all__ = [
    "AXIOMS", "Ax", "CondAx", "Derivation", "Refl", "Statement", "Sym", "Trans",
    "check", "format_script", "parse_script", "search", "Interpretation",
    "OracleConfig", "Verdict", "equiv_bounded", "evaluate", "leq_bounded",
    "refute", "Expr", "Family", "ParseError", "VarId", "check_family", "parse",
    "to_text",
]
