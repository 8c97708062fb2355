"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v -s`` or
``python3 tests/test_acceptance.py``.
"""

import itertools
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gen import all_vars, random_clean, random_expr, random_sigma  # noqa: E402
from rklat import lemmas  # noqa: E402
from rklat.rewrite import AXIOMS, Statement, check, search  # noqa: E402
from rklat.semantics import (  # noqa: E402
    EPS, Interpretation, OracleConfig, equiv_bounded, evaluate, lang_concat,
    lang_mirror, leq_bounded, mirror_word, refute_implication, sigma_A,
)
from rklat.syntax import (  # noqa: E402
    Family, Inter, Mirror, ONE, Prod, Sum, Top, Var, VarId, parse, size,
)
from rklat.transform import (  # noqa: E402
    MIRRORED, NFBudgetError, NFItem, TestSet, all_discharged,
    build_sigma_dblprime, closure, comb, down, erase, interone_expr, is_clean, nf_expr, odot, otimes,
    phi_top_pair, positive, psi, reduce, reduce_to_onefree, rule_closure,
    test_expr, test_leq, up, word_join, word_leq,
)

# cheap oracle for the high-volume checks
LIGHT = OracleConfig(trials=10, bound=4, exhaustive_cap=300)


def _report(n, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
    print(line)
    return line


# --- 1. axiom soundness --------------------------------------------------

def criterion_1():
    t0 = time.time()
    cfg = OracleConfig()
    bad = []
    plain = [n for n, a in AXIOMS.items() if not a.conditional]
    for name in plain:
        ax = AXIOMS[name]
        if equiv_bounded(ax.lhs, ax.rhs, cfg).refuted:
            bad.append(name)
    for name in (n for n, a in AXIOMS.items() if a.conditional):
        ax = AXIOMS[name]
        cex, hits = refute_implication(ax.premise, (ax.lhs, ax.rhs), OracleConfig(trials=50))
        if cex is not None or hits == 0:
            bad.append(name)
    e, f = Var(VarId("e")), Var(VarId("f"))
    mutant = equiv_bounded(Mirror(Prod(e, f)), Prod(Mirror(e), Mirror(f)), OracleConfig(trials=0))
    secs = time.time() - t0
    ok = not bad and mutant.refuted and secs < 300
    return ok, (f"{len(plain)} equations + {len(AXIOMS) - len(plain)} conditional unrefuted"
                f"{' except ' + ', '.join(bad) if bad else ''}; "
                f"conv-seq mutant {'refuted' if mutant.refuted else 'NOT refuted'}; {secs:.1f}s")


# --- 2. derived laws -----------------------------------------------------

SEARCHED = {"plus-idem": False, "zero-conv": False, "one-conv": False,
            "zero-iter": False, "one-iter": True}


def criterion_2():
    failed = []
    shipped = sorted(lemmas.PROOF_DIR.glob("laws/*.prf"))
    for path in shipped:
        stmt, d = lemmas.read_script(path)
        if stmt is None or not check(d, stmt):
            failed.append(path.stem)
    missing = set(lemmas.DERIVED_LAWS) - {p.stem for p in shipped}
    found = []
    for name, conditional in SEARCHED.items():
        stmt, _ = lemmas.DERIVED_LAWS[name]()
        d = search(stmt, depth=6, size_cap=40, conditional=conditional)
        if d is not None and check(d, stmt):
            found.append(name)
    ok = not failed and not missing and len(found) == len(SEARCHED)
    return ok, (f"{len(shipped) - len(failed)}/{len(shipped)} shipped scripts check"
                f"{' (missing ' + ', '.join(sorted(missing)) + ')' if missing else ''}; "
                f"search re-found {len(found)}/{len(SEARCHED)}")


# --- 3. mirror elimination -----------------------------------------------

def criterion_3():
    rng = random.Random(30)
    comb_ok = 0
    for _ in range(500):
        e = random_expr(rng, Family.ONE_FREE, size=rng.randint(1, 10))
        fwd, bwd = comb(e), comb(e, MIRRORED)
        good = is_clean(fwd) and is_clean(bwd)
        for _ in range(3):
            s = random_sigma(rng, all_vars(), bound=4)
            v = evaluate(e, s)
            good &= evaluate(fwd, s) == v and evaluate(bwd, s) == lang_mirror(v)
        comb_ok += good
    round_ok = 0
    for _ in range(500):
        e = random_clean(rng, size=rng.randint(1, 12))
        round_ok += down(up(e)) == e
    lemma_ok = 0
    for _ in range(200):
        e = random_clean(rng, size=rng.randint(1, 8))
        s = random_sigma(rng, all_vars(directed=True), bound=3, eps_free=True)
        lemma_ok += evaluate(up(e), s) == psi(evaluate(e, build_sigma_dblprime(s)))
    ok = comb_ok == 500 and round_ok == 500 and lemma_ok == 200
    return ok, (f"comb {comb_ok}/500, down.up {round_ok}/500, "
                f"doubling lemma {lemma_ok}/200")


# --- 4. tests ------------------------------------------------------------

def criterion_4():
    xs = [VarId(v) for v in "wxyz"]
    subsets = [TestSet(c) for k in range(5) for c in itertools.combinations(xs, k)]
    agree = 0
    for A, B in itertools.product(subsets, repeat=2):
        sub = B.issubset(A)
        sem = EPS in evaluate(test_expr(B), sigma_A(A.set, set(xs)))
        dec = test_leq(A, test_expr(B))
        try:
            p = lemmas.test_le_test(A, B)
            derived = bool(check(p.proof, Statement.leq(test_expr(A), test_expr(B))))
        except ValueError:
            # no derivation when sigma_A separates the two tests (soundness)
            derived = False
        valid = not leq_bounded(test_expr(A), test_expr(B), LIGHT).refuted
        agree += sub == sem == dec == derived == valid
    rng = random.Random(40)
    inter_ok = 0
    for _ in range(500):
        e = random_expr(rng, Family.FULL, size=rng.randint(1, 10))
        inter_ok += not equiv_bounded(Inter(ONE, e), interone_expr(e), LIGHT).refuted
    ok = agree == 256 and inter_ok == 500
    return ok, f"four-way agreement {agree}/256 pairs; interone {inter_ok}/500"


# --- 5. normal forms -----------------------------------------------------

def _item(rng):
    test = TestSet(v for v in "xyz" if rng.random() < 0.3)
    if rng.random() < 0.3:
        return NFItem(test)
    return NFItem(test, random_expr(rng, Family.ONE_FREE, size=rng.randint(1, 5)))


def criterion_5():
    rng = random.Random(50)
    nf_ok = n = guarded = 0
    while n < 500:
        e = random_expr(rng, Family.FULL, size=rng.randint(1, 12))
        if size(e) > 12:
            continue
        try:
            normal = nf_expr(e, max_items=8)
        except NFBudgetError:
            guarded += 1
            continue
        n += 1
        nf_ok += not equiv_bounded(e, normal, LIGHT).refuted
    item_ok = 0
    for _ in range(200):
        a, b = _item(rng), _item(rng)
        good = True
        for _ in range(3):
            s = random_sigma(rng, all_vars(), bound=4)
            ea, eb = evaluate(a.expr(), s), evaluate(b.expr(), s)
            good &= evaluate(odot(a, b).expr(), s) == lang_concat(ea, eb, s.bound)
            good &= set().union(*(evaluate(i.expr(), s) for i in otimes(a, b))) == ea & eb
        item_ok += good
    red_ok = 0
    for _ in range(300):
        f = random_expr(rng, Family.FULL, size=rng.randint(1, 10))
        A = TestSet(v for v in "xyz" if rng.random() < 0.5)
        r = reduce(A, f)
        good = not leq_bounded(Prod(test_expr(A), r), f, LIGHT).refuted
        good &= not leq_bounded(f, r, LIGHT).refuted
        for _ in range(3):
            s = random_sigma(rng, all_vars(), bound=4, eps_free=True)
            tau = Interpretation(s.alphabet, s.bound, {
                x: (s[x] | {EPS}) if x in A.set else s[x] for x in s.variables})
            good &= evaluate(r, s) == evaluate(r, tau)
        red_ok += good
    pos_ok = n = 0
    while n < 300:
        f = random_expr(rng, Family.FULL, size=rng.randint(1, 10))
        try:
            p = positive(f)
        except NFBudgetError:
            guarded += 1
            continue
        n += 1
        pos_ok += not leq_bounded(p, f, LIGHT).refuted
    ok = nf_ok == 500 and item_ok == 200 and red_ok == 300 and pos_ok == 300
    return ok, (f"nf {nf_ok}/500, odot/otimes {item_ok}/200, "
                f"reduce {red_ok}/300, positive {pos_ok}/300; "
                f"{guarded} terms skipped by the 8-item guard")


# --- 6. word order -------------------------------------------------------

def _split_ok(u, v):
    # every split of u lifts to a split of v
    for i in range(len(u) + 1):
        if not any(word_leq(u[:i], v[:j]) and word_leq(u[i:], v[j:])
                   for j in range(len(v) + 1)):
            return False
    return True


def criterion_6():
    universe = ["".join(p) for n in range(6) for p in itertools.product("ab@", repeat=n)]
    rel = rule_closure("ab", 5)
    agree = sum(word_leq(u, v) == ((u, v) in rel) for u in universe for v in universe)
    total = len(universe) ** 2
    props = True
    for u, v in rel:
        props &= erase(u) == erase(v)
        props &= word_leq(mirror_word(u), mirror_word(v))
        props &= _split_ok(u, v)
    by_erasure = {}
    for u in universe:
        by_erasure.setdefault(erase(u), []).append(u)
    for group in by_erasure.values():
        for u, v in itertools.combinations(group, 2):
            w = word_join(u, v)
            props &= w is not None and word_leq(u, w) and word_leq(v, w)
            # least: below every common upper bound in the universe
            props &= all(word_leq(w, x) for x in group if word_leq(u, x) and word_leq(v, x))
    rng = random.Random(60)
    seeds = ["a", "b", "ab", "ba", "@a", "a@", "b@a", "@ab", "aa"]
    closed_ok = 0
    for _ in range(200):
        L = closure({rng.choice(seeds) for _ in range(2)}, 6)
        M = closure({rng.choice(seeds) for _ in range(2)}, 6)
        closed_ok += {erase(u) for u in L & M} == {erase(u) for u in L} & {erase(u) for u in M}
    ok = agree == total and props and closed_ok == 200
    return ok, (f"order agrees on {agree}/{total} pairs; properties "
                f"{'hold' if props else 'FAIL'}; closed pairs {closed_ok}/200")


# --- 7. top elimination fixtures -----------------------------------------

def _v(n):
    return Var(VarId(n))


def _levi(swapped=False):
    e1, e2, f1, f2 = map(_v, ("e1", "e2", "f1", "f2"))
    lhs = Inter(Prod(e1, e2), Prod(f1, f2))
    if swapped:
        rhs = Sum(Prod(Prod(e2, Top()), f1), Prod(Prod(f2, Top()), e1))
    else:
        rhs = Sum(Prod(Prod(e1, Top()), f2), Prod(Prod(f1, Top()), e2))
    return lhs, rhs


def _factorisation():
    a, b, c = map(_v, "abc")
    return Inter(Prod(a, b), Prod(a, c)), Prod(a, Inter(Prod(Top(), b), Prod(Top(), c)))


def criterion_7():
    cfg = OracleConfig()
    levi = leq_bounded(*phi_top_pair(*_levi()), cfg)
    fact = leq_bounded(*phi_top_pair(*_factorisation()), cfg)
    swap = leq_bounded(*phi_top_pair(*_levi(swapped=True)), cfg)
    if swap.refuted:
        print("  swapped Levi counterexample:", swap.counterexample.describe())
    for name, v in (("Levi", levi), ("factorisation", fact)):
        if v.refuted:
            print(f"  {name} after top elimination refuted by:", v.counterexample.describe())
    ok = not levi.refuted and not fact.refuted and swap.refuted
    return ok, (f"Levi {'REFUTED' if levi.refuted else 'UNREFUTED'}, "
                f"factorisation {'REFUTED' if fact.refuted else 'UNREFUTED'}, "
                f"swapped {'REFUTED' if swap.refuted else 'UNREFUTED'}")


# --- 8. pipeline smoke ---------------------------------------------------

PAIRS = [
    ("x", "x"), ("x", "x + y"), ("1 & x", "1"), ("1 & x", "x"), ("x & 1", "x^+"),
    ("x . y", "(x + y)^+"), ("1", "x^*"), ("x", "x . x^*"), ("(x . y)'", "y' . x'"),
    ("x & y", "x"), ("(1 & x) . y", "y"), ("(1 & x) . y", "x . y"),
    ("x^+ . x^+", "x^+"), ("1 + x", "(1 + x)^+"),
    ("x", "y"), ("x . y", "y . x"), ("1", "x"), ("x", "1"), ("x^+", "x"),
    ("1 & x", "y"),
]


def criterion_8():
    exhaustive = OracleConfig(trials=0)
    match = 0
    for e, f in PAIRS:
        e, f = parse(e), parse(f)
        valid = not leq_bounded(e, f, exhaustive).refuted
        match += all_discharged(reduce_to_onefree(e, f, exhaustive)) == valid
    ok = match == len(PAIRS)
    return ok, f"{match}/{len(PAIRS)} pipeline verdicts match the exhaustive tier"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4,
            criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("n", range(1, len(CRITERIA) + 1))
def test_criterion(n, capsys):
    ok, detail = CRITERIA[n - 1]()
    with capsys.disabled():
        print("\n" + f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
    assert ok, detail


def test_levi_counterexample_is_genuine():
    # φ(top) only covers words built from variable words, so Levi fails
    lhs, rhs = phi_top_pair(*_levi())
    s = Interpretation(("a", "b"), 3, {
        VarId("e1"): {"ab"}, VarId("e2"): {"a"}, VarId("f1"): {"a"},
        VarId("f2"): {"ba"}, VarId("_top"): set()})
    assert "aba" in evaluate(lhs, s) and "aba" not in evaluate(rhs, s)


def test_factorisation_counterexample_is_genuine():
    lhs, rhs = phi_top_pair(*_factorisation())
    s = Interpretation(("a", "b"), 3, {
        VarId("a"): {"a", "ab"}, VarId("b"): {"ba"}, VarId("c"): {"a"},
        VarId("_top"): set()})
    assert "aba" in evaluate(lhs, s) and "aba" not in evaluate(rhs, s)


if __name__ == "__main__":
    results = [_report(i, *c()) for i, c in enumerate(CRITERIA, 1)]
    sys.exit(0 if all(r.startswith("PASS") for r in results) else 1)
