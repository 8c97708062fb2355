"""Derivation builders for derived laws.

Everything here returns plain ``Derivation`` trees that the checker in
``rewrite`` verifies independently; nothing in this module is trusted.
Inequalities are carried as :class:`Le` values, i.e. proofs of ``a + b == b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from .rewrite import (
    Ax, CondAx, Derivation, L2R, R2L, Refl, Statement, Sym, Trans, chain,
    axiom, check, format_script, match, parse_script, run, subterm_at,
)
from .syntax import (
    Expr, Family, Inter, Mirror, ONE, Plus, Prod, Sum, Var, VarId, parse, to_text,
)


def lift(d: Derivation, prefix) -> Derivation:
    """The same derivation applied below ``prefix`` (congruence)."""
    prefix = tuple(prefix)
    if not prefix:
        return d
    if isinstance(d, Refl):
        return Refl()
    if isinstance(d, Sym):
        return Sym(lift(d.inner, prefix))
    if isinstance(d, Trans):
        return Trans(lift(d.first, prefix), lift(d.second, prefix))
    if isinstance(d, Ax):
        return Ax(d.axiom, d.direction, prefix + d.at, d.bindings)
    if isinstance(d, CondAx):
        return CondAx(d.axiom, d.direction, prefix + d.at, d.bindings, d.premise)
    raise TypeError(d)


class Calc:
    """Equational chain builder that tracks the current term."""

    def __init__(self, start, family: Family = Family.FULL):
        self.start = _e(start)
        self.term = self.start
        self.family = family
        self.steps = []

    def _push(self, d):
        self.term = run(d, self.term, self.family)
        self.steps.append(d)
        return self

    def _full(self, name, direction, at, bindings):
        # record every metavariable so the step also replays backwards
        ax = axiom(name)
        src = ax.lhs if direction is L2R else ax.rhs
        found = match(src, subterm_at(self.term, at)) or {}
        out = {str(k): v for k, v in found.items()}
        out.update(bindings)
        return out

    def ax(self, name, direction=L2R, at=(), **bindings):
        b = self._full(name, direction, at, bindings)
        return self._push(Ax(name, direction, at, b))

    def cax(self, name, premise: Derivation, direction=L2R, at=(), **bindings):
        b = self._full(name, direction, at, bindings)
        return self._push(CondAx(name, direction, at, b, premise))

    def use(self, d: Derivation, at=(), backward=False):
        d = lift(d, at)
        return self._push(Sym(d) if backward else d)

    def expect(self, text) -> "Calc":
        want = _e(text)
        if self.term != want:
            raise AssertionError(f"calc is at {to_text(self.term)}, expected {to_text(want)}")
        return self

    def done(self) -> Derivation:
        return chain(*self.steps)


def _e(x) -> Expr:
    return parse(x) if isinstance(x, str) else x


# ---------------------------------------------------------------------------
# inequalities


@dataclass(frozen=True)
class Le:
    """A checked-by-construction proof that ``lo <= hi``, i.e. ``lo + hi == hi``."""

    lo: Expr
    hi: Expr
    proof: Derivation

    def statement(self, family=None) -> Statement:
        return Statement.leq(self.lo, self.hi, family)


def plus_idem(e) -> Derivation:
    """e + e == e, from inter-idem and inter-plus."""
    e = _e(e)
    return Calc(Sum(e, e)).ax("inter-idem", R2L, [0]).ax("inter-plus", f=e).done()


def le_refl(a) -> Le:
    a = _e(a)
    return Le(a, a, plus_idem(a))


def le_from_eq(d: Derivation, a, b) -> Le:
    """a == b (by d) gives a <= b."""
    a, b = _e(a), _e(b)
    return Le(a, b, Calc(Sum(a, b)).use(d, [0]).use(plus_idem(b)).done())


def le_from_inter(d: Derivation, a, b) -> Le:
    """a & b == a (by d) gives a <= b."""
    a, b = _e(a), _e(b)
    c = (Calc(Sum(a, b)).use(d, [0], backward=True)
         .ax("inter-comm", L2R, [0]).ax("inter-plus"))
    return Le(a, b, c.done())


def le_trans(p: Le, q: Le) -> Le:
    if p.hi != q.lo:
        raise ValueError(f"cannot chain {to_text(p.hi)} and {to_text(q.lo)}")
    a, b, c = p.lo, p.hi, q.hi
    d = (Calc(Sum(a, c)).use(q.proof, [1], backward=True)
         .ax("plus-ass").use(p.proof, [0]).use(q.proof))
    return Le(a, c, d.done())


def le_chain(*ps: Le) -> Le:
    out = ps[0]
    for p in ps[1:]:
        out = le_trans(out, p)
    return out


def le_rewrite_lo(d: Derivation, a2, p: Le) -> Le:
    """a2 == p.lo (by d) gives a2 <= p.hi."""
    a2 = _e(a2)
    return Le(a2, p.hi, Calc(Sum(a2, p.hi)).use(d, [0]).use(p.proof).done())


def le_rewrite_hi(p: Le, d: Derivation, b2) -> Le:
    """p.hi == b2 (by d) gives p.lo <= b2."""
    return le_trans(p, le_from_eq(d, p.hi, b2))


def antisym(p: Le, q: Le) -> Derivation:
    """From a <= b and b <= a, a == b."""
    if p.lo != q.hi or p.hi != q.lo:
        raise ValueError("antisym needs a <= b and b <= a")
    return Calc(p.lo).use(q.proof, backward=True).ax("plus-com").use(p.proof).done()


def le_join(p: Le, q: Le) -> Le:
    """a <= c and b <= c give a + b <= c."""
    if p.hi != q.hi:
        raise ValueError("join needs a common upper bound")
    a, b, c = p.lo, q.lo, p.hi
    d = Calc(Sum(Sum(a, b), c)).ax("plus-ass", R2L).use(q.proof, [1]).use(p.proof)
    return Le(Sum(a, b), c, d.done())


def le_join_all(ps: Iterable[Le]) -> Le:
    """Join for a left-nested sum of the lower bounds."""
    ps = list(ps)
    out = ps[0]
    for p in ps[1:]:
        out = le_join(out, p)
    return out


def le_sum_left(a, b) -> Le:
    """a <= a + b."""
    a, b = _e(a), _e(b)
    d = Calc(Sum(a, Sum(a, b))).ax("plus-ass").use(plus_idem(a), [0])
    return Le(a, Sum(a, b), d.done())


def le_sum_right(a, b) -> Le:
    """b <= a + b."""
    a, b = _e(a), _e(b)
    d = (Calc(Sum(b, Sum(a, b))).ax("plus-com", L2R, [1]).ax("plus-ass")
         .use(plus_idem(b), [0]).ax("plus-com"))
    return Le(b, Sum(a, b), d.done())


def le_seq_left(c, p: Le) -> Le:
    """a <= b gives c . a <= c . b."""
    c = _e(c)
    d = Calc(Sum(Prod(c, p.lo), Prod(c, p.hi))).ax("seq-plus", R2L).use(p.proof, [1])
    return Le(Prod(c, p.lo), Prod(c, p.hi), d.done())


def le_seq_right(p: Le, c) -> Le:
    """a <= b gives a . c <= b . c."""
    c = _e(c)
    d = Calc(Sum(Prod(p.lo, c), Prod(p.hi, c))).ax("plus-seq", R2L).use(p.proof, [0])
    return Le(Prod(p.lo, c), Prod(p.hi, c), d.done())


def le_plus_mono(p: Le) -> Le:
    """a <= b gives a^+ <= b^+ (via left-ind)."""
    a, b = p.lo, p.hi
    bp = Plus(b)
    # a . b+ <= b . b+ <= b+
    b_iter = le_from_eq(Sym(Ax("iter-left")), Sum(b, Prod(b, bp)), bp)
    step = le_chain(le_seq_right(p, bp), le_sum_right(b, Prod(b, bp)), b_iter)
    # left-ind: a+ . b+ <= b+
    ind = Le(Prod(Plus(a), bp), bp,
             Calc(Sum(Prod(Plus(a), bp), bp)).cax("left-ind", step.proof).done())
    # a+ . a <= a+ . b <= a+ . b+ <= b+
    b_le_bp = le_trans(le_sum_left(b, Prod(b, bp)), b_iter)
    tail = le_chain(le_seq_left(Plus(a), p), le_seq_left(Plus(a), b_le_bp), ind)
    # a+ == a + a+ . a <= b+
    both = le_join(le_chain(p, b_le_bp), tail)
    return le_rewrite_lo(Ax("iter-right"), Plus(a), both)


def le_iter(a) -> Le:
    """a <= a^+."""
    a = _e(a)
    ap = Plus(a)
    return le_rewrite_hi(le_sum_left(a, Prod(a, ap)), Sym(Ax("iter-left")), ap)


# ---------------------------------------------------------------------------
# associativity / commutativity / idempotence normalisation


class _ACI:
    def __init__(self, cls, assoc, comm, idem):
        self.cls = cls
        self.assoc = assoc  # op(e, op(f, g)) = op(op(e, f), g)
        self.comm = comm
        self.idem = idem  # callable(x) -> derivation of op(x, x) == x

    def atoms(self, t):
        if isinstance(t, self.cls):
            return self.atoms(t.left) + self.atoms(t.right)
        return [t]

    @staticmethod
    def key(t):
        return (to_text(t),)

    def nest(self, t):
        """Right-nest t; returns (term, derivation)."""
        if not isinstance(t, self.cls):
            return t, Refl()
        l, dl = self.nest(t.left)
        r, dr = self.nest(t.right)
        c = Calc(t).use(dl, [0]).use(dr, [1])
        out, da = self.append(l, r)
        c.use(da)
        assert c.term == out
        return out, c.done()

    def append(self, l, r):
        if not isinstance(l, self.cls):
            return self.cls(l, r), Refl()
        c = Calc(self.cls(l, r)).ax(self.assoc, R2L)
        rest, d = self.append(l.right, r)
        c.use(d, [1])
        return self.cls(l.left, rest), c.done()

    def insert(self, x, s):
        """op(x, s) for sorted, duplicate-free s; returns (term, derivation)."""
        op = self.cls
        if not isinstance(s, op):
            if x == s:
                return x, self.idem(x)
            if self.key(x) < self.key(s):
                return op(x, s), Refl()
            return op(s, x), Ax(self.comm)
        head, tail = s.left, s.right
        if x == head:
            c = Calc(op(x, s)).ax(self.assoc).use(self.idem(x), [0])
            return s, c.done()
        if self.key(x) < self.key(head):
            return op(x, s), Refl()
        c = Calc(op(x, s)).ax(self.assoc).ax(self.comm, L2R, [0]).ax(self.assoc, R2L)
        rest, d = self.insert(x, tail)
        c.use(d, [1])
        return op(head, rest), c.done()

    def sort(self, t):
        if not isinstance(t, self.cls):
            return t, Refl()
        rest, d = self.sort(t.right)
        c = Calc(t).use(d, [1])
        out, d2 = self.insert(t.left, rest)
        c.use(d2)
        return out, c.done()

    def normalize(self, t):
        n, d1 = self.nest(t)
        s, d2 = self.sort(n)
        return s, chain(d1, d2)

    def equate(self, t1, t2) -> Derivation:
        n1, d1 = self.normalize(_e(t1))
        n2, d2 = self.normalize(_e(t2))
        if n1 != n2:
            raise ValueError(f"{to_text(t1)} and {to_text(t2)} differ beyond assoc/comm/idem")
        return chain(d1, Sym(d2))


INTER_ACI = _ACI(Inter, "inter-assoc", "inter-comm", lambda x: Ax("inter-idem"))
SUM_ACI = _ACI(Sum, "plus-ass", "plus-com", plus_idem)


def aci_inter(t1, t2) -> Derivation:
    return INTER_ACI.equate(t1, t2)


def aci_sum(t1, t2) -> Derivation:
    return SUM_ACI.equate(t1, t2)


# ---------------------------------------------------------------------------
# tests  <A> = a & (b & ... & 1)


def test_term(vars_: Iterable) -> Expr:
    names = sorted({v if isinstance(v, VarId) else VarId(v) for v in vars_})
    t = ONE
    for v in reversed(names):
        t = Inter(Var(v), t)
    return t


def _ids(A):
    return frozenset(v if isinstance(v, VarId) else VarId(v) for v in A)


def test_le_one(A) -> Le:
    t = test_term(A)
    return le_from_inter(aci_inter(Inter(t, ONE), t), t, ONE)


def test_le_var(A, a) -> Le:
    a = a if isinstance(a, VarId) else VarId(a)
    if a not in _ids(A):
        raise ValueError(f"{a} is not tested by {sorted(map(str, _ids(A)))}")
    t = test_term(A)
    return le_from_inter(aci_inter(Inter(t, Var(a)), t), t, Var(a))


def test_le_test(A, B) -> Le:
    """<A> <= <B>; only derivable when B is a subset of A."""
    A, B = _ids(A), _ids(B)
    if not B <= A:
        raise ValueError("<A> <= <B> requires B to be a subset of A")
    ta, tb = test_term(A), test_term(B)
    return le_from_inter(aci_inter(Inter(ta, tb), ta), ta, tb)


def test_inter_union(A, B) -> Derivation:
    """<A> & <B> == <A u B>."""
    return aci_inter(Inter(test_term(A), test_term(B)), test_term(_ids(A) | _ids(B)))


def _as_guarded(t) -> Derivation:
    # <A> == 1 & <A>
    return aci_inter(t, Inter(ONE, t))


def test_seq_inter(A, B) -> Derivation:
    """<A> . <B> == <A> & <B>."""
    ta, tb = test_term(A), test_term(B)
    c = (Calc(Inter(ta, tb)).use(_as_guarded(ta), [0])
         .ax("seq-1-r", R2L, [0])
         .ax("test-inter")
         .use(_as_guarded(tb), [1], backward=True)
         .use(_as_guarded(ta), [0], backward=True)
         .expect(Prod(ta, tb)))
    return Sym(c.done())


def test_seq_union(A, B) -> Derivation:
    """<A> . <B> == <A u B>."""
    return chain(test_seq_inter(A, B), test_inter_union(A, B))


def test_idem(A) -> Derivation:
    """<A> == <A> . <A>."""
    return chain(Sym(Ax("inter-idem")), Sym(test_seq_inter(A, A)))


def test_commute(A, e) -> Derivation:
    """<A> . e == e . <A>."""
    t, e = test_term(A), _e(e)
    return (Calc(Prod(t, e)).use(_as_guarded(t), [0]).ax("test-seq-com")
            .use(_as_guarded(t), [1], backward=True).done())


def test_distrib(A, B, e, f) -> Derivation:
    """(<A> . e) & (<B> . f) == <A u B> . (e & f)."""
    ta, tb, e, f = test_term(A), test_term(B), _e(e), _e(f)
    c = (Calc(Inter(Prod(ta, e), Prod(tb, f)))
         .use(_as_guarded(ta), [0, 0])
         .ax("test-inter")                       # (1&<A>) . (e & <B>.f)
         .ax("inter-comm", L2R, [1])              # (1&<A>) . (<B>.f & e)
         .use(_as_guarded(tb), [1, 0, 0])
         .ax("test-inter", L2R, [1])              # (1&<A>) . ((1&<B>) . (f & e))
         .ax("seq-assoc")
         .use(_as_guarded(ta), [0, 0], backward=True)
         .use(_as_guarded(tb), [0, 1], backward=True)
         .use(test_seq_union(A, B), [0])
         .ax("inter-comm", L2R, [1]))
    return c.done()


def one_plus() -> Derivation:
    """1^+ == 1."""
    prem = Calc("1 . 1 + 1").ax("seq-1-l", L2R, [0]).use(plus_idem(ONE)).done()
    return (Calc("1^+").ax("iter-left").ax("plus-com")
            .cax("right-ind", prem).expect("1").done())


def one_conv() -> Derivation:
    """1' == 1."""
    return (Calc("1'").ax("seq-1-l", R2L).ax("conv-conv", R2L, [0])
            .ax("conv-seq", R2L).ax("seq-1-l", L2R, [0]).ax("conv-conv")
            .expect("1").done())


def zero_conv() -> Derivation:
    """0' == 0."""
    return (Calc("0'", Family.ONE_FREE).ax("seq-0-r", R2L, [0], e="0'")
            .ax("conv-seq").ax("conv-conv", L2R, [0]).ax("seq-0-r")
            .expect("0").done())


def test_iter(A) -> Derivation:
    """<A>^+ == <A>, an instance of test-iter with g = 0 and f = 1."""
    t = test_term(A)
    c = (Calc(Plus(t)).use(_as_guarded(t), [0])
         .ax("seq-1-r", R2L, [0])
         .ax("plus-0", R2L, [0]).ax("plus-com", L2R, [0])  # (0 + (1&<A>).1)^+
         .ax("test-iter")                                   # 0^+ + (1&<A>).(0+1)^+
         .ax("plus-com", L2R, [1, 1, 0]).ax("plus-0", L2R, [1, 1, 0])
         .use(one_plus(), [1, 1]).ax("seq-1-r", L2R, [1])
         .use(zero_plus(), [0]).ax("plus-com").ax("plus-0")
         .use(_as_guarded(t), backward=True))
    return c.done()


def test_conv(A) -> Derivation:
    """<A>' == <A>."""
    t = test_term(A)
    c = (Calc(Mirror(t)).use(_as_guarded(t), [0])
         .ax("conv-inter").use(one_conv(), [0]).ax("test-conv")
         .use(_as_guarded(t), backward=True))
    return c.done()


def zero_plus() -> Derivation:
    """0^+ == 0."""
    return (Calc("0^+", Family.SIMPLE).ax("iter-left").ax("seq-0-r", L2R, [1])
            .ax("plus-0").expect("0").done())


# ---------------------------------------------------------------------------
# derived laws

E, F = parse("e"), parse("f")
EP = parse("e^+")


def law_plus_idem() -> Derivation:
    return plus_idem(E)


def law_inter_zero() -> Derivation:
    """e & 0 == 0."""
    return (Calc("e & 0").ax("inter-comm").ax("plus-0", R2L)
            .ax("inter-plus").expect("0").done())


def law_absorb() -> Derivation:
    """e & (e + f) == e."""
    return (Calc("e & (e + f)").ax("inter-comm").ax("plus-inter")
            .ax("inter-idem", L2R, [0]).ax("plus-com")
            .ax("inter-comm", L2R, [0]).ax("inter-plus").expect("e").done())


def law_iter_square() -> Le:
    """e^+ . e^+ <= e^+ via right-ind."""
    step = le_rewrite_hi(le_sum_right(E, parse("e^+ . e")), Sym(Ax("iter-right")), EP)
    d = Calc("e^+ . e^+ + e^+").cax("right-ind", step.proof).done()
    return Le(parse("e^+ . e^+"), EP, d)


def law_iter_iter() -> Derivation:
    """(e^+)^+ == e^+."""
    epp = Plus(EP)
    ind = Le(Prod(epp, EP), EP,
             Calc(Sum(Prod(epp, EP), EP)).cax("left-ind", law_iter_square().proof).done())
    up = le_rewrite_lo(Ax("iter-right"), epp, le_join(le_refl(EP), ind))
    return antisym(up, le_iter(EP))


def law_one_plus_iter() -> Derivation:
    """(1 + e)^+ == 1 + e^+."""
    a = parse("1 + e")
    b = parse("1 + e^+")
    ap = Plus(a)
    one_b = le_sum_left(ONE, EP)
    ep_b = le_sum_right(ONE, EP)
    e_b = le_trans(le_iter(E), ep_b)
    eep_b = le_trans(le_rewrite_hi(le_sum_right(E, parse("e . e^+")), Sym(Ax("iter-left")), EP), ep_b)
    # (1 + e) . (1 + e^+) expands to four summands, each below 1 + e^+
    expand = (Calc(Prod(a, b)).ax("plus-seq").ax("seq-plus", L2R, [0]).ax("seq-plus", L2R, [1])
              .ax("seq-1-l", L2R, [0, 0]).ax("seq-1-l", L2R, [0, 1]).ax("seq-1-r", L2R, [1, 0])
              .expect("(1 + e^+) + (e + e . e^+)"))
    four = le_join(le_join(one_b, ep_b), le_join(e_b, eep_b))
    premise = le_rewrite_lo(expand.done(), Prod(a, b), four)
    ind = Le(Prod(ap, b), b, Calc(Sum(Prod(ap, b), b)).cax("left-ind", premise.proof).done())
    # (1 + e)^+ == (1 + e)^+ . 1 <= (1 + e)^+ . (1 + e^+) <= 1 + e^+
    down = le_chain(le_seq_left(ap, one_b), ind)
    down = le_rewrite_lo(Ax("seq-1-r", R2L), ap, down)
    # 1 <= 1 + e <= (1 + e)^+  and  e^+ <= (1 + e)^+
    a_le_ap = le_iter(a)
    up = le_join(le_trans(le_sum_left(ONE, E), a_le_ap), le_plus_mono(le_sum_right(ONE, E)))
    return antisym(down, up)


def _eq(l, r):
    return Statement.equiv(l, r)


def _le(l, r):
    return Statement.leq(l, r)


DERIVED_LAWS = {
    "plus-idem": lambda: (_eq("e + e", "e"), law_plus_idem()),
    "inter-zero": lambda: (_eq("e & 0", "0"), law_inter_zero()),
    "absorb": lambda: (_eq("e & (e + f)", "e"), law_absorb()),
    "iter-square": lambda: (_le("e^+ . e^+", "e^+"), law_iter_square().proof),
    "iter-iter": lambda: (_eq("(e^+)^+", "e^+"), law_iter_iter()),
    "one-plus-iter": lambda: (_eq("(1 + e)^+", "1 + e^+"), law_one_plus_iter()),
    "zero-conv": lambda: (_eq("0'", "0"), zero_conv()),
    "one-conv": lambda: (_eq("1'", "1"), one_conv()),
    "zero-iter": lambda: (_eq("0^+", "0"), zero_plus()),
    "one-iter": lambda: (_eq("1^+", "1"), one_plus()),
}

_A, _B, _AB = ("a", "b"), ("b", "c"), ("a", "b", "c")
_TA, _TB, _TAB = test_term(_A), test_term(_B), test_term(_AB)

TEST_IDENTITIES = {
    "below-one": lambda: (_le(_TA, ONE), test_le_one(_A).proof),
    "below-var": lambda: (_le(_TA, "a"), test_le_var(_A, "a").proof),
    "below-test": lambda: (_le(_TAB, _TB), test_le_test(_AB, _B).proof),
    "inter-union": lambda: (_eq(Inter(_TA, _TB), _TAB), test_inter_union(_A, _B)),
    "seq-inter": lambda: (_eq(Prod(_TA, _TB), Inter(_TA, _TB)), test_seq_inter(_A, _B)),
    "seq-square": lambda: (_eq(_TA, Prod(_TA, _TA)), test_idem(_A)),
    "commute": lambda: (_eq(Prod(_TA, E), Prod(E, _TA)), test_commute(_A, E)),
    "distrib": lambda: (_eq(Inter(Prod(_TA, E), Prod(_TB, F)), Prod(_TAB, Inter(E, F))),
                        test_distrib(_A, _B, E, F)),
    "iter": lambda: (_eq(Plus(_TA), _TA), test_iter(_A)),
    "conv": lambda: (_eq(Mirror(_TA), _TA), test_conv(_A)),
}

PROOF_DIR = Path(__file__).parent / "proofs"


def scripts() -> dict:
    """Relative path -> (statement, derivation) for every shipped script."""
    out = {}
    for name, build in DERIVED_LAWS.items():
        out[f"laws/{name}.prf"] = build()
    for name, build in TEST_IDENTITIES.items():
        out[f"tests/{name}.prf"] = build()
    return out


def write_scripts(root: Optional[Path] = None) -> list:
    root = Path(root or PROOF_DIR)
    written = []
    for rel, (stmt, d) in scripts().items():
        report = check(d, stmt)
        if not report.ok:
            raise AssertionError(f"{rel}: {report}")
        path = root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(f"; {stmt}\n{format_script(d)}\n")
        written.append(path)
    return written


def read_script(path) -> tuple:
    """(statement or None, derivation) from a script file; the statement is
    taken from a leading ``; lhs == rhs`` comment when present."""
    text = Path(path).read_text()
    stmt = None
    first = text.lstrip().splitlines()[0] if text.strip() else ""
    if first.startswith(";"):
        try:
            stmt = Statement.parse(first[1:].strip())
        except ValueError:
            stmt = None
    return stmt, parse_script(text)


if __name__ == "__main__":
    for p in write_scripts():
        print(p)
