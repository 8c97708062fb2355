import itertools
import random

import pytest
from hypothesis import given

from gen import all_vars, random_clean, random_expr, random_sigma, words
from rklat.semantics import Interpretation, evaluate, mirror_word, restrict
from rklat.syntax import Family, VarId
from rklat.transform import (
    build_sigma_dblprime, build_sigma_prime, closure, erase, eta, is_closed,
    is_valid_word, psi, rule_closure, up, word_join, word_leq,
)
from rklat.transform.words import bullet_runs, eta_inverse, insertions

X = VarId("x")
UNIVERSE = ["".join(p) for n in range(5) for p in itertools.product("ab@", repeat=n)]


@pytest.mark.parametrize("u, out", [("@a@b", "ab"), ("@", ""), ("ab", "ab")])
def test_erase(u, out):
    assert erase(u) == out


@pytest.mark.parametrize("u, out", [("ab", "@a@b"), ("", ""), ("a", "@a")])
def test_eta(u, out):
    assert eta(u) == out


def test_eta_rejects_bullets():
    with pytest.raises(ValueError):
        eta("a@")


@given(words(), words())
def test_eta_laws(u, v):
    assert erase(eta(u)) == u
    assert eta(u + v) == eta(u) + eta(v)
    assert len(eta(u)) == 2 * len(u)
    assert eta_inverse(eta(u)) == u


def test_psi():
    assert psi({"@a@b"}) == {"ab"}
    assert psi({"a@"}) == frozenset()
    assert psi({""}) == {""}


@pytest.mark.parametrize("u, v, out", [("a", "@a", True), ("a", "a@", True),
                                       ("ab", "ba", False), ("a@b", "ab", False),
                                       ("", "@@", True), ("@a", "a@", False)])
def test_word_leq(u, v, out):
    assert word_leq(u, v) is out


def test_word_join():
    assert word_join("@a", "a@") == "@a@"
    assert word_join("a", "a") == "a"
    assert word_join("a", "b") is None
    assert bullet_runs("@a@@b") == (1, 2, 0)


@pytest.mark.parametrize("u, out", [("@a", True), ("a@", True), ("@", False), ("", False),
                                    ("@aa@", True), ("@@", False), ("aa", False)])
def test_is_valid_word(u, out):
    assert is_valid_word(u) is out


def test_word_leq_matches_rule_closure():
    rel = rule_closure("ab", 4)
    for u in UNIVERSE:
        for v in UNIVERSE:
            assert word_leq(u, v) == ((u, v) in rel), (u, v)


def test_order_properties_small():
    for u in UNIVERSE:
        for v in UNIVERSE:
            if not word_leq(u, v):
                continue
            assert erase(u) == erase(v)
            assert word_leq(mirror_word(u), mirror_word(v))


def test_sigma_prime_examples():
    s = Interpretation(("a",), 1, {X: {""}})
    assert build_sigma_prime(s, {X}, 2)[X] == {"@", "@@"}
    s = Interpretation(("a",), 1, {X: {"a"}})
    assert build_sigma_prime(s, set(), 2)[X] == {"a", "@a", "a@"}
    s = Interpretation(("a",), 1, {X: set()})
    assert build_sigma_prime(s, {X}, 2)[X] == frozenset()


def test_sigma_prime_images_are_closed():
    rng = random.Random(2)
    for _ in range(50):
        s = random_sigma(rng, all_vars(), bound=2)
        sp = build_sigma_prime(s, {X}, 5)
        for x in s.variables:
            assert is_closed(sp[x], 5)
            # bullets stand in for the empty word, so erasing gives sigma back
            assert {erase(u) for u in sp[x]} == s[x]


def test_erasure_preserves_one_free_semantics():
    rng = random.Random(3)
    L, slack = 3, 3
    for _ in range(60):
        e = random_expr(rng, Family.ONE_FREE, size=rng.randint(1, 7))
        s = random_sigma(rng, all_vars(), bound=L, words=2)
        sp = build_sigma_prime(s, set(all_vars()), slack * L)
        got = {erase(u) for u in evaluate(e, sp) if u}
        want = evaluate(e, s)
        # erasure never adds words; with enough bullet budget it loses none
        assert restrict(got, L) == want, "increase slack"


def test_sigma_dblprime_examples():
    s = Interpretation(("a", "b"), 2, {VarId("x", "f"): {"a"}, VarId("x", "b"): {"b"}})
    assert build_sigma_dblprime(s)[X] == {"@a", "b@"}
    assert build_sigma_dblprime(s).bound == 4
    s = Interpretation(("a", "b"), 2, {VarId("x", "f"): {"ab"}, VarId("x", "b"): set()})
    assert build_sigma_dblprime(s)[X] == {"@a@b"}
    with pytest.raises(ValueError):
        build_sigma_dblprime(Interpretation(("a",), 1, {VarId("x", "f"): {""}}))


def test_sigma_dblprime_words_are_valid():
    rng = random.Random(4)
    for _ in range(30):
        s = random_sigma(rng, all_vars(directed=True), bound=3, eps_free=True)
        for lang in build_sigma_dblprime(s).values.values():
            assert all(is_valid_word(u) for u in lang)


def test_mirror_elimination_lemma_small():
    rng = random.Random(6)
    for _ in range(40):
        e = random_clean(rng, size=rng.randint(1, 7))
        s = random_sigma(rng, all_vars(directed=True), bound=3, eps_free=True)
        assert evaluate(up(e), s) == psi(evaluate(e, build_sigma_dblprime(s)))


def test_closed_languages_commute_with_erasure():
    rng = random.Random(7)
    for _ in range(40):
        seeds_l = {rng.choice(["a", "ab", "@a", "b@", "ba"]) for _ in range(2)}
        seeds_m = {rng.choice(["a", "a@", "@ab", "b", "ba"]) for _ in range(2)}
        L, M = closure(seeds_l, 6), closure(seeds_m, 6)
        assert {erase(u) for u in L & M} == {erase(u) for u in L} & {erase(u) for u in M}


def test_insertions_counts():
    # 2 gaps, up to 2 bullets: 1 + 2 + 3
    assert len(set(insertions("a", 2))) == 6
