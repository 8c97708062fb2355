import itertools
import random

import pytest

from gen import all_vars, random_expr, random_sigma
from rklat.semantics import EPS, evaluate, sigma_A
from rklat.syntax import Family, ONE, Inter, parse, var
from rklat.transform import TestSet, interone, interone_expr, test_expr, test_leq
from rklat.transform.subunits import format_tests

NAMES = ("x", "y", "z")
SUBSETS = [TestSet(c) for k in range(4) for c in itertools.combinations(NAMES, k)]


def test_test_expr_shape():
    assert test_expr(TestSet()) == ONE
    assert test_expr({"y", "x"}) == Inter(var("x"), Inter(var("y"), ONE))
    assert str(TestSet(["y", "x"])) == "{x,y}"


def test_testset_order_and_ops():
    a, b = TestSet("x"), TestSet(["x", "y"])
    assert a < b and a.issubset(b) and not b.issubset(a)
    assert a | TestSet("y") == b
    assert sorted([b, a, TestSet()]) == [TestSet(), a, b]
    with pytest.raises(AttributeError):
        a.vars = ()


@pytest.mark.parametrize("text, out", [
    ("0", "{}"),
    ("1", "{{}}"),
    ("x", "{{x}}"),
    ("x . y + 1", "{{}, {x,y}}"),
    ("(x & y')^+", "{{x,y}}"),
])
def test_interone_examples(text, out):
    assert format_tests(interone(parse(text))) == out


def test_interone_rejects_top():
    with pytest.raises(ValueError):
        interone(parse("top", allow_top=True))


@pytest.mark.parametrize("A", SUBSETS, ids=str)
@pytest.mark.parametrize("B", SUBSETS, ids=str)
def test_sigma_A_agrees_with_subset(A, B):
    # <A> <= <B> iff B is a subset of A, and sigma_A separates the rest
    sigma = sigma_A(A.set, set(all_vars()))
    holds = evaluate(test_expr(A), sigma) <= evaluate(test_expr(B), sigma)
    assert holds == B.issubset(A) == test_leq(A, test_expr(B))


def test_interone_is_the_unit_part():
    rng = random.Random(8)
    for _ in range(150):
        e = random_expr(rng, Family.FULL, size=rng.randint(1, 8))
        s = random_sigma(rng, all_vars(), bound=3)
        lhs = evaluate(Inter(ONE, e), s)
        assert lhs == evaluate(interone_expr(e), s)
        assert lhs <= {EPS}


def test_test_leq_matches_sigma_A():
    rng = random.Random(9)
    for _ in range(150):
        f = random_expr(rng, Family.FULL, size=rng.randint(1, 8))
        A = rng.choice(SUBSETS)
        sigma = sigma_A(A.set, set(all_vars()))
        assert test_leq(A, f) == (EPS in evaluate(f, sigma))
