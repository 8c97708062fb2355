"""Expression trees for reversible Kleene lattices, with a text syntax.

Concrete syntax (ASCII)::

    expr  := inter ("+" inter)*
    inter := cat ("&" cat)*
    cat   := post ("." post)*
    post  := atom ("^+" | "^*" | "'")*
    atom  := "0" | "1" | ident | ident "!f" | ident "!b" | "(" expr ")"

``e^*`` is sugar for ``1 + e^+`` and never survives parsing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Iterator, Mapping, Optional, Union

__all__ = [
    "VarId", "Expr", "Zero", "One", "Var", "Sum", "Prod", "Inter", "Plus",
    "Mirror", "Top", "ZERO", "ONE", "TOP", "Family", "ParseError",
    "parse", "to_text", "check_family", "free_vars", "substitute", "size",
    "subterms", "children", "replace_children", "var", "sum_of",
    "TOP_VAR_NAME",
]

# Reserved for the fresh variable introduced by top elimination.
TOP_VAR_NAME = "_top"


@dataclass(frozen=True, order=True)
class VarId:
    name: str
    direction: Optional[str] = None  # None, "f" (forward) or "b" (mirrored)

    def __post_init__(self):
        if not self.name or not re.fullmatch(r"[A-Za-z0-9_]+", self.name):
            raise ValueError(f"bad variable name {self.name!r}")
        if self.direction not in (None, "f", "b"):
            raise ValueError(f"bad direction {self.direction!r}")

    @property
    def base(self) -> "VarId":
        return VarId(self.name)

    def __str__(self):
        return self.name if self.direction is None else f"{self.name}!{self.direction}"


class Expr:
    """Base class of expression nodes.

    Nodes are immutable. Hash, size and the set of constructors used below a
    node are computed once at construction, since proof search hashes and
    measures the same subterms many times.
    """

    __slots__ = ("_hash", "_size", "_flags")
    _fields: tuple = ()

    def _init(self, *kids):
        flags = _FLAG.get(type(self), 0)
        n = 1
        for k in kids:
            flags |= k._flags
            n += k._size
        object.__setattr__(self, "_flags", flags)
        object.__setattr__(self, "_size", n)
        object.__setattr__(self, "_hash", hash((type(self).__name__,) + self._key()))

    def _key(self) -> tuple:
        return tuple(getattr(self, f) for f in self._fields)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or self._hash != other._hash:
            return False
        return self._key() == other._key()

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        args = ", ".join(repr(v) for v in self._key())
        return f"{type(self).__name__}({args})"

    def __str__(self):
        return to_text(self)

    def __reduce__(self):
        return type(self), self._key()


class _Leaf(Expr):
    __slots__ = ()

    def __init__(self):
        self._init()


class Zero(_Leaf):
    __slots__ = ()


class One(_Leaf):
    __slots__ = ()


class Top(_Leaf):
    """The full language. Only accepted by top elimination."""

    __slots__ = ()


class Var(Expr):
    __slots__ = ("id",)
    _fields = ("id",)

    def __init__(self, id: VarId):
        object.__setattr__(self, "id", id)
        self._init()


class _Binary(Expr):
    __slots__ = ("left", "right")
    _fields = ("left", "right")

    def __init__(self, left: Expr, right: Expr):
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)
        self._init(left, right)


class Sum(_Binary):
    __slots__ = ()


class Prod(_Binary):
    __slots__ = ()


class Inter(_Binary):
    __slots__ = ()


class _Unary(Expr):
    __slots__ = ("arg",)
    _fields = ("arg",)

    def __init__(self, arg: Expr):
        object.__setattr__(self, "arg", arg)
        self._init(arg)


class Plus(_Unary):
    __slots__ = ()


class Mirror(_Unary):
    __slots__ = ()


_HAS_ONE, _HAS_MIRROR, _HAS_TOP = 1, 2, 4
_FLAG = {One: _HAS_ONE, Mirror: _HAS_MIRROR, Top: _HAS_TOP}

ZERO = Zero()
ONE = One()
TOP = Top()

_BINARY = _Binary
_UNARY = _Unary


def var(name: str, direction: Optional[str] = None) -> Var:
    return Var(VarId(name, direction))


def sum_of(terms: Iterable[Expr]) -> Expr:
    """Left-nested sum of ``terms``; the empty sum is 0."""
    out = None
    for t in terms:
        out = t if out is None else Sum(out, t)
    return ZERO if out is None else out


def children(e: Expr) -> tuple:
    if isinstance(e, _Binary):
        return (e.left, e.right)
    if isinstance(e, _Unary):
        return (e.arg,)
    return ()


def replace_children(e: Expr, kids) -> Expr:
    if isinstance(e, _BINARY):
        return type(e)(kids[0], kids[1])
    if isinstance(e, _UNARY):
        return type(e)(kids[0])
    return e


def subterms(e: Expr) -> Iterator[tuple[tuple[int, ...], Expr]]:
    """Pre-order walk yielding ``(path, subterm)`` pairs."""
    stack = [((), e)]
    while stack:
        path, t = stack.pop()
        yield path, t
        kids = children(t)
        for i in reversed(range(len(kids))):
            stack.append((path + (i,), kids[i]))


def size(e: Expr) -> int:
    return e._size


# ---------------------------------------------------------------------------
# grammar families


class Family(Enum):
    FULL = "full"
    ONE_FREE = "one-free"
    SIMPLE = "simple"


def check_family(e: Expr, family: Family) -> bool:
    """True iff ``e`` only uses constructors allowed in ``family``."""
    banned = _HAS_TOP
    if family is not Family.FULL:
        banned |= _HAS_ONE
    if family is Family.SIMPLE:
        banned |= _HAS_MIRROR
    return not e._flags & banned


def free_vars(e: Expr) -> frozenset:
    return frozenset(t.id for _, t in subterms(e) if isinstance(t, Var))


def substitute(e: Expr, mapping: Mapping[VarId, Expr]) -> Expr:
    """Simultaneously replace variables by expressions."""
    if not mapping:
        return e

    def go(t):
        if isinstance(t, Var):
            return mapping.get(t.id, t)
        kids = children(t)
        if not kids:
            return t
        return replace_children(t, [go(k) for k in kids])

    return go(e)


def transform_bottom_up(e: Expr, fn: Callable[[Expr], Expr]) -> Expr:
    kids = children(e)
    if kids:
        e = replace_children(e, [transform_bottom_up(k, fn) for k in kids])
    return fn(e)


# ---------------------------------------------------------------------------
# parsing


class ParseError(ValueError):
    def __init__(self, message: str, offset: int, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(expected))
        detail = f" (expected one of: {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at offset {offset}{detail}")


_TOKEN = re.compile(r"\s*(?:(\^\+|\^\*|[+&.'()])|([A-Za-z0-9_]+)(!f|!b)?)")


def _tokenize(text: str):
    pos = 0
    toks = []
    while True:
        m = re.compile(r"\s*").match(text, pos)
        pos = m.end()
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos,
                             ["^+", "^*", "'", "+", "&", ".", "(", ")", "identifier"])
        start = m.start(1) if m.group(1) else m.start(2)
        if m.group(1):
            toks.append(("op", m.group(1), start))
        else:
            toks.append(("id", (m.group(2), m.group(3)), start))
        pos = m.end()
    toks.append(("eof", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text, allow_top, allow_reserved):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_top = allow_top
        self.allow_reserved = allow_reserved

    def peek(self):
        return self.toks[self.i]

    def accept(self, op):
        kind, val, _ = self.peek()
        if kind == "op" and val == op:
            self.i += 1
            return True
        return False

    def fail(self, expected):
        kind, val, off = self.peek()
        what = "end of input" if kind == "eof" else f"token {self._show(kind, val)!r}"
        raise ParseError(f"unexpected {what}", off, expected)

    @staticmethod
    def _show(kind, val):
        if kind == "id":
            return val[0] + (val[1] or "")
        return val

    def parse(self):
        e = self.expr()
        if self.peek()[0] != "eof":
            self.fail(["+", "&", ".", "^+", "^*", "'", "end of input"])
        return e

    def expr(self):
        e = self.inter()
        while self.accept("+"):
            e = Sum(e, self.inter())
        return e

    def inter(self):
        e = self.cat()
        while self.accept("&"):
            e = Inter(e, self.cat())
        return e

    def cat(self):
        e = self.post()
        while self.accept("."):
            e = Prod(e, self.post())
        return e

    def post(self):
        e = self.atom()
        while True:
            if self.accept("^+"):
                e = Plus(e)
            elif self.accept("^*"):
                e = Sum(ONE, Plus(e))
            elif self.accept("'"):
                e = Mirror(e)
            else:
                return e

    def atom(self):
        kind, val, off = self.peek()
        if kind == "op" and val == "(":
            self.i += 1
            e = self.expr()
            if not self.accept(")"):
                self.fail([")", "+", "&", ".", "^+", "^*", "'"])
            return e
        if kind == "id":
            name, suffix = val
            self.i += 1
            if suffix is None and name == "0":
                return ZERO
            if suffix is None and name == "1":
                return ONE
            if suffix is None and name == "top" and self.allow_top:
                return TOP
            if name == TOP_VAR_NAME and not self.allow_reserved:
                raise ParseError(f"identifier {TOP_VAR_NAME} is reserved", off)
            if name in ("0", "1"):
                raise ParseError(f"constant {name} cannot carry a direction", off)
            return Var(VarId(name, suffix[1] if suffix else None))
        self.fail(["0", "1", "identifier", "("])


def parse(text: str, *, allow_top: bool = False, allow_reserved: bool = False) -> Expr:
    """Parse ``text`` into an expression tree.

    ``allow_top`` makes the keyword ``top`` denote the full language (input to
    top elimination only). ``allow_reserved`` admits the reserved ``_top``
    variable, which only appears in machine-produced text.
    """
    return _Parser(text, allow_top, allow_reserved).parse()


# ---------------------------------------------------------------------------
# printing

_PREC = {Sum: 1, Inter: 2, Prod: 3}
_SYM = {Sum: "+", Inter: "&", Prod: "."}


def _prec(e: Expr) -> int:
    return _PREC.get(type(e), 4)


def to_text(e: Expr) -> str:
    """Render ``e`` so that ``parse(to_text(e)) == e``."""
    if isinstance(e, Zero):
        return "0"
    if isinstance(e, One):
        return "1"
    if isinstance(e, Top):
        return "top"
    if isinstance(e, Var):
        return str(e.id)
    if isinstance(e, _BINARY):
        p = _PREC[type(e)]
        left = to_text(e.left)
        if _prec(e.left) < p:
            left = f"({left})"
        right = to_text(e.right)
        # infix operators are left-associative
        if _prec(e.right) <= p:
            right = f"({right})"
        return f"{left} {_SYM[type(e)]} {right}"
    arg = to_text(e.arg)
    if _prec(e.arg) < 4:
        arg = f"({arg})"
    return arg + ("^+" if isinstance(e, Plus) else "'")


def as_expr(x: Union[str, Expr]) -> Expr:
    return parse(x) if isinstance(x, str) else x
