"""Eliminating the full-language constant ``top``.

``top`` is replaced by the star of the sum of every variable and its mirror,
over the variables present plus a fresh one (``_top``).
"""

from __future__ import annotations

from typing import Iterable, Optional

from ..syntax import (
    Expr, Mirror, ONE, Plus, Sum, TOP_VAR_NAME, Top, Var, VarId, free_vars,
    sum_of, transform_bottom_up,
)

FRESH = VarId(TOP_VAR_NAME)


def top_image(variables: Iterable[VarId]) -> Expr:
    xs = sorted(set(variables) - {FRESH}) + [FRESH]
    body = sum_of(Sum(Var(x), Mirror(Var(x))) for x in xs)
    return Sum(ONE, Plus(body))


def phi_top(e: Expr, variables: Optional[Iterable[VarId]] = None) -> Expr:
    """Replace every ``top`` in ``e``.

    ``variables`` defaults to the variables of ``e``; when translating both
    sides of an inequation pass the variables of both.
    """
    xs = free_vars(e) if variables is None else frozenset(variables)
    image = top_image(xs)
    return transform_bottom_up(e, lambda t: image if isinstance(t, Top) else t)


def phi_top_pair(e: Expr, f: Expr) -> tuple:
    xs = free_vars(e) | free_vars(f)
    return phi_top(e, xs), phi_top(f, xs)
