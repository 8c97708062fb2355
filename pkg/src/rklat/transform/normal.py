"""Normal forms: finite sums of tests ``<A>`` and guarded terms ``<A> . e``.

``nf`` follows the structural construction clause by clause; ``odot`` and
``otimes`` combine items for concatenation and intersection.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from ..syntax import (
    Expr, Family, Inter, Mirror, One, Plus, Prod, Sum, Top, Var, Zero,
    ONE, check_family, substitute, sum_of, to_text,
)
from .subunits import TestSet, interone, test_expr

DEFAULT_MAX_ITEMS = 8


class NFBudgetError(RuntimeError):
    """The iteration clause would enumerate too many subsets."""


@dataclass(frozen=True)
class NFItem:
    test: TestSet
    body: Optional[Expr] = None

    def __post_init__(self):
        if self.body is not None and not check_family(self.body, Family.ONE_FREE):
            raise ValueError(f"normal form body must be one-free: {to_text(self.body)}")

    @property
    def is_test(self) -> bool:
        return self.body is None

    def expr(self) -> Expr:
        t = test_expr(self.test)
        return t if self.body is None else Prod(t, self.body)

    def sort_key(self):
        return (self.body is not None, to_text(self.body) if self.body is not None else "",
                len(self.test), tuple(map(str, self.test)))

    def __str__(self):
        t = "<" + str(self.test) + ">"
        if self.body is None:
            return t
        body = to_text(self.body)
        if isinstance(self.body, (Sum, Inter)):
            body = f"({body})"
        return f"{t} . {body}"


@dataclass(frozen=True)
class NormalForm:
    items: frozenset = frozenset()

    def sorted(self) -> list:
        return sorted(self.items, key=NFItem.sort_key)

    def expr(self) -> Expr:
        return sum_of(i.expr() for i in self.sorted())

    def __iter__(self):
        return iter(self.sorted())

    def __len__(self):
        return len(self.items)

    def __str__(self):
        return "\n".join(str(i) for i in self.sorted())


def odot(x: NFItem, y: NFItem) -> NFItem:
    """Item for the concatenation of two items."""
    t = x.test | y.test
    if x.body is None:
        return NFItem(t, y.body)
    if y.body is None:
        return NFItem(t, x.body)
    return NFItem(t, Prod(x.body, y.body))


def otimes(x: NFItem, y: NFItem) -> frozenset:
    """Items for the intersection of two items."""
    t = x.test | y.test
    if x.body is None and y.body is None:
        return frozenset([NFItem(t)])
    if x.body is None or y.body is None:
        body = x.body if x.body is not None else y.body
        return frozenset(NFItem(t | c) for c in interone(body))
    return frozenset([NFItem(t, Inter(x.body, y.body))])


def nf(e: Expr, max_items: int = DEFAULT_MAX_ITEMS) -> NormalForm:
    """Normal form of ``e``; the iteration clause enumerates every nonempty
    subset of the guarded items of its argument, and gives up with
    ``NFBudgetError`` beyond ``max_items`` of them."""
    if not check_family(e, Family.FULL):
        raise ValueError(f"nf needs an expression without top: {to_text(e)}")
    memo: dict = {}

    def go(t) -> frozenset:
        hit = memo.get(t)
        if hit is not None:
            return hit
        if isinstance(t, Zero):
            r = frozenset()
        elif isinstance(t, One):
            r = frozenset([NFItem(TestSet())])
        elif isinstance(t, Var):
            r = frozenset([NFItem(TestSet(), t)])
        elif isinstance(t, Sum):
            r = go(t.left) | go(t.right)
        elif isinstance(t, Mirror):
            r = frozenset(i if i.is_test else NFItem(i.test, Mirror(i.body)) for i in go(t.arg))
        elif isinstance(t, Prod):
            right = go(t.right)
            r = frozenset(odot(a, b) for a in go(t.left) for b in right)
        elif isinstance(t, Inter):
            right = go(t.right)
            r = frozenset(c for a in go(t.left) for b in right for c in otimes(a, b))
        elif isinstance(t, Plus):
            inner = go(t.arg)
            tests = [i for i in inner if i.is_test]
            guarded = sorted((i for i in inner if not i.is_test), key=NFItem.sort_key)
            if len(guarded) > max_items:
                raise NFBudgetError(
                    f"iteration over {len(guarded)} guarded items exceeds the budget of {max_items}")
            out = set(tests)
            for k in range(1, len(guarded) + 1):
                for sub in itertools.combinations(guarded, k):
                    test = TestSet(v for i in sub for v in i.test)
                    out.add(NFItem(test, Plus(sum_of(i.body for i in sub))))
            r = frozenset(out)
        elif isinstance(t, Top):
            raise ValueError("nf is undefined on top")
        else:
            raise TypeError(t)
        memo[t] = r
        return r

    return NormalForm(go(e))


def nf_expr(e: Expr, max_items: int = DEFAULT_MAX_ITEMS) -> Expr:
    return nf(e, max_items).expr()


def reduce(A, f: Expr) -> Expr:
    """Replace each tested variable ``a`` in ``f`` by ``1 + a``."""
    A = A if isinstance(A, TestSet) else TestSet(A)
    return substitute(f, {a: Sum(ONE, Var(a)) for a in A})


def positive(f: Expr, max_items: int = DEFAULT_MAX_ITEMS) -> Expr:
    """Largest one-free lower bound of ``f``: the bodies of the items of
    ``nf(f)`` guarded by the empty test."""
    items = [i for i in nf(f, max_items).sorted() if not i.is_test and not i.test.vars]
    return sum_of(i.body for i in items)
