import pickle

import pytest
from hypothesis import given

from gen import exprs
from rklat.syntax import (
    Family, Inter, Mirror, ONE, ParseError, Plus, Prod, Sum, TOP, Top,
    VarId, ZERO, check_family, free_vars, parse, size, substitute, subterms,
    sum_of, to_text, var,
)

x, y, z = var("x"), var("y"), var("z")


@pytest.mark.parametrize("text, tree", [
    ("0", ZERO),
    ("1", ONE),
    ("x", x),
    ("x + y . z", Sum(x, Prod(y, z))),
    ("x & y + z", Sum(Inter(x, y), z)),
    ("x . y & z", Inter(Prod(x, y), z)),
    ("x + y + z", Sum(Sum(x, y), z)),
    ("x . (y . z)", Prod(x, Prod(y, z))),
    ("x^+'", Mirror(Plus(x))),
    ("(x . y)'", Mirror(Prod(x, y))),
    ("x^*", Sum(ONE, Plus(x))),
    ("x!f . y!b", Prod(var("x", "f"), var("y", "b"))),
])
def test_parse(text, tree):
    assert parse(text) == tree


def test_whitespace_is_irrelevant():
    assert parse("x.y+z") == parse("  x . y  +\n z ")


@pytest.mark.parametrize("text", ["0 + 1", "1 + x^+", "(x . y)'", "(x & y)^+",
                                  "a + (b + c)", "x!f . y!b", "x^+'", "(x + y) . z",
                                  "x & (y & 1)"])
def test_print_roundtrip(text):
    e = parse(text)
    assert parse(to_text(e)) == e
    assert to_text(e) == text


@given(exprs())
def test_roundtrip_property(e):
    assert parse(to_text(e)) == e


@pytest.mark.parametrize("text, offset", [("x +", 3), ("(x", 2), ("x ) y", 2),
                                          ("x $ y", 2), ("", 0), ("1!f", 0)])
def test_parse_errors_report_offset(text, offset):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.offset == offset


def test_parse_error_lists_expected_tokens():
    with pytest.raises(ParseError) as info:
        parse("x +")
    assert "identifier" in info.value.expected


def test_reserved_name():
    with pytest.raises(ParseError):
        parse("_top + x")
    assert parse("_top", allow_reserved=True) == var("_top")


def test_top_keyword_only_when_allowed():
    assert parse("top") == var("top")
    assert parse("top & x", allow_top=True) == Inter(TOP, x)


def test_families():
    simple, onefree, full = parse("x . y^+ & z"), parse("x' + y"), parse("1 + x")
    assert check_family(simple, Family.SIMPLE)
    assert not check_family(onefree, Family.SIMPLE)
    assert check_family(onefree, Family.ONE_FREE)
    assert not check_family(full, Family.ONE_FREE)
    assert check_family(full, Family.FULL)
    assert not check_family(Top(), Family.FULL)


def test_structural_helpers():
    e = parse("x . (y + x)")
    assert free_vars(e) == {VarId("x"), VarId("y")}
    assert size(e) == 5
    assert [p for p, _ in subterms(e)] == [(), (0,), (1,), (1, 0), (1, 1)]
    assert substitute(e, {VarId("x"): ONE}) == parse("1 . (y + 1)")
    assert sum_of([]) == ZERO
    assert sum_of([x, y, z]) == parse("x + y + z")


def test_immutable_and_hashable():
    e = parse("x . y")
    with pytest.raises(AttributeError):
        e.left = y
    assert hash(e) == hash(parse("x . y"))
    assert {e: 1}[parse("x.y")] == 1
    assert pickle.loads(pickle.dumps(e)) == e


def test_varid_validation():
    with pytest.raises(ValueError):
        VarId("x y")
    with pytest.raises(ValueError):
        VarId("x", "q")
    assert str(VarId("x", "b")) == "x!b"
    assert VarId("x", "b").base == VarId("x")
