"""Splitting ``e <= f`` into obligations on tests and on one-free terms.

Each item of ``nf(e)`` yields one obligation. A test ``<A>`` is decided
exactly through interone; a guarded item ``<A> . e'`` leaves the one-free
containment ``e' <= positive(reduce(A, f))``, which only gets an oracle
verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from ..semantics import OracleConfig, Verdict, leq_bounded
from ..syntax import Expr, Family, check_family, free_vars, to_text
from .normal import DEFAULT_MAX_ITEMS, nf, positive, reduce
from .subunits import TestSet, test_leq


@dataclass(frozen=True)
class TestObligation:
    __test__ = False

    test: TestSet
    target: Expr
    holds: bool

    def line(self) -> str:
        return f"TEST A={self.test} |- {to_text(self.target)} : DECIDED {str(self.holds).lower()}"

    def record(self) -> dict:
        return {"kind": "test", "A": [str(v) for v in self.test],
                "f": to_text(self.target), "decided": self.holds}

    @property
    def ok(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class OneFreeObligation:
    test: TestSet
    lhs: Expr
    rhs: Expr
    verdict: Optional[Verdict] = None

    def line(self) -> str:
        status = "UNCHECKED" if self.verdict is None else str(self.verdict)
        return f"ONEFREE {to_text(self.lhs)} <= {to_text(self.rhs)} : {status}"

    def record(self) -> dict:
        out = {"kind": "onefree", "A": [str(v) for v in self.test],
               "lhs": to_text(self.lhs), "rhs": to_text(self.rhs)}
        if self.verdict is not None:
            out["verdict"] = "refuted" if self.verdict.refuted else "unrefuted"
            if self.verdict.refuted:
                out["witness"] = self.verdict.counterexample.describe()
        return out

    @property
    def ok(self) -> bool:
        return self.verdict is None or not self.verdict.refuted


Obligation = Union[TestObligation, OneFreeObligation]


def reduce_to_onefree(e: Expr, f: Expr, cfg: Optional[OracleConfig] = OracleConfig(),
                      max_items: int = DEFAULT_MAX_ITEMS) -> list:
    """Obligations for ``e <= f`` in normal-form item order.

    Pass ``cfg=None`` to skip the oracle on one-free obligations.
    """
    for side in (e, f):
        if not check_family(side, Family.FULL):
            raise ValueError(f"expression outside the full family: {to_text(side)}")
    xs = free_vars(e) | free_vars(f)
    out = []
    for item in nf(e, max_items):
        if item.is_test:
            out.append(TestObligation(item.test, f, test_leq(item.test, f)))
            continue
        rhs = positive(reduce(item.test, f), max_items)
        verdict = None
        if cfg is not None:
            verdict = leq_bounded(item.body, rhs, cfg)
        out.append(OneFreeObligation(item.test, item.body, rhs, verdict))
    return out


def all_discharged(obligations) -> bool:
    return all(o.ok for o in obligations)
