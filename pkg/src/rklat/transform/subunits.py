"""Tests ``<A>`` (intersections of variables with 1) and sub-units."""

from __future__ import annotations

from typing import Iterable

from ..syntax import (
    Expr, Inter, Mirror, One, Plus, Prod, Sum, Top, Var, VarId, Zero, ONE,
    sum_of,
)


def _vid(v) -> VarId:
    return v if isinstance(v, VarId) else VarId(v)


class TestSet:
    """A finite set of tested variables, kept sorted."""

    __test__ = False  # not a pytest class
    __slots__ = ("vars",)

    def __init__(self, vars: Iterable = ()):
        object.__setattr__(self, "vars", tuple(sorted({_vid(v) for v in vars})))

    def __setattr__(self, name, value):
        raise AttributeError("TestSet is immutable")

    def __hash__(self):
        return hash(self.vars)

    def __eq__(self, other):
        return isinstance(other, TestSet) and self.vars == other.vars

    def __lt__(self, other: "TestSet") -> bool:
        # canonical order: smaller sets first, then lexicographic
        return (len(self.vars), self.vars) < (len(other.vars), other.vars)

    def __repr__(self):
        return f"TestSet({[str(v) for v in self.vars]!r})"

    @property
    def set(self) -> frozenset:
        return frozenset(self.vars)

    def __or__(self, other: "TestSet") -> "TestSet":
        return TestSet(self.vars + other.vars)

    def issubset(self, other: "TestSet") -> bool:
        return self.set <= other.set

    def __len__(self):
        return len(self.vars)

    def __iter__(self):
        return iter(self.vars)

    @property
    def expr(self) -> Expr:
        return test_expr(self)

    def __str__(self):
        return "{" + ",".join(str(v) for v in self.vars) + "}"


def test_expr(A) -> Expr:
    """``a & (b & ... & 1)`` in variable order; the empty test is 1."""
    vars_ = A.vars if isinstance(A, TestSet) else TestSet(A).vars
    t = ONE
    for v in reversed(vars_):
        t = Inter(Var(v), t)
    return t


test_expr.__test__ = False


def interone(e: Expr) -> frozenset:
    """Sets C such that ``1 & e`` is the sum of the tests ``<C>``."""
    if isinstance(e, Zero):
        return frozenset()
    if isinstance(e, One):
        return frozenset([TestSet()])
    if isinstance(e, Var):
        return frozenset([TestSet([e.id])])
    if isinstance(e, Sum):
        return interone(e.left) | interone(e.right)
    if isinstance(e, (Prod, Inter)):
        right = interone(e.right)
        return frozenset(a | b for a in interone(e.left) for b in right)
    if isinstance(e, (Plus, Mirror)):
        return interone(e.arg)
    if isinstance(e, Top):
        raise ValueError("interone is undefined on top")
    raise TypeError(e)


def interone_expr(e: Expr) -> Expr:
    return sum_of(test_expr(c) for c in sorted(interone(e)))


def test_leq(A, f: Expr) -> bool:
    """Decide ``<A> <= f``: some C in interone(f) is a subset of A."""
    A = A if isinstance(A, TestSet) else TestSet(A)
    return any(c.issubset(A) for c in interone(f))


test_leq.__test__ = False


def format_tests(cs: Iterable[TestSet]) -> str:
    return "{" + ", ".join(str(c) for c in sorted(cs)) + "}"
