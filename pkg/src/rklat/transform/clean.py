"""Pushing mirrors down to variables, and the directed-variable encoding.

A one-free expression is *clean* when mirror only wraps plain variables.
``up`` turns a clean expression into a simple one over directed variables
(``x`` becomes ``x!f``, ``x'`` becomes ``x!b``) and ``down`` undoes it.
"""

from __future__ import annotations

from ..syntax import (
    Expr, Family, Inter, Mirror, One, Plus, Prod, Sum, Top, Var, VarId, Zero,
    check_family, to_text,
)

FORWARD = True
MIRRORED = False


class NotClean(ValueError):
    pass


def comb(e: Expr, forward: bool = FORWARD) -> Expr:
    """Clean expression denoting ``e`` (forward) or its mirror image."""
    if not check_family(e, Family.ONE_FREE):
        raise ValueError(f"comb needs a one-free expression: {to_text(e)}")
    return _comb(e, forward)


def _comb(e, b):
    if isinstance(e, Zero):
        return e
    if isinstance(e, Var):
        return e if b else Mirror(e)
    if isinstance(e, Plus):
        return Plus(_comb(e.arg, b))
    if isinstance(e, Mirror):
        return _comb(e.arg, not b)
    if isinstance(e, Sum):
        return Sum(_comb(e.left, b), _comb(e.right, b))
    if isinstance(e, Inter):
        return Inter(_comb(e.left, b), _comb(e.right, b))
    if isinstance(e, Prod):
        if b:
            return Prod(_comb(e.left, b), _comb(e.right, b))
        return Prod(_comb(e.right, b), _comb(e.left, b))
    raise ValueError(f"comb cannot handle {type(e).__name__}")


def is_clean(e: Expr) -> bool:
    if isinstance(e, (One, Top)):
        return False
    if isinstance(e, Mirror):
        return isinstance(e.arg, Var) and e.arg.id.direction is None
    if isinstance(e, Var):
        return e.id.direction is None
    if isinstance(e, Zero):
        return True
    if isinstance(e, Plus):
        return is_clean(e.arg)
    return is_clean(e.left) and is_clean(e.right)


def up(e: Expr) -> Expr:
    """Clean one-free expression to a simple one over directed variables."""
    if not is_clean(e):
        raise NotClean(f"not a clean one-free expression: {to_text(e)}")
    return _up(e)


def _up(e):
    if isinstance(e, Var):
        return Var(VarId(e.id.name, "f"))
    if isinstance(e, Mirror):
        return Var(VarId(e.arg.id.name, "b"))
    if isinstance(e, Zero):
        return e
    if isinstance(e, Plus):
        return Plus(_up(e.arg))
    return type(e)(_up(e.left), _up(e.right))


def down(e: Expr) -> Expr:
    """Inverse of ``up``: ``x!f`` becomes ``x`` and ``x!b`` becomes ``x'``."""
    if not check_family(e, Family.SIMPLE):
        raise ValueError(f"down needs a simple expression: {to_text(e)}")
    return _down(e)


def _down(e):
    if isinstance(e, Var):
        if e.id.direction is None:
            raise ValueError(f"variable {e.id} carries no direction")
        base = Var(e.id.base)
        return base if e.id.direction == "f" else Mirror(base)
    if isinstance(e, Zero):
        return e
    if isinstance(e, Plus):
        return Plus(_down(e.arg))
    return type(e)(_down(e.left), _down(e.right))
