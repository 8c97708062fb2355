"""Axioms of reversible Kleene lattices, derivations and their checker.

Derivations are trees of ``Refl``, ``Sym``, ``Trans``, ``Ax`` and ``CondAx``
nodes. An ``Ax`` node rewrites the subterm at a path with one axiom in one
direction; congruence is therefore implicit in paths. The checker recomputes
every intermediate term, so a derivation only records the steps taken.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Mapping, Optional, Union

from .syntax import (
    Expr, Family, ONE, Sum, Var, VarId, ZERO,
    check_family, children, free_vars, parse, replace_children, size,
    subterms, substitute, to_text,
)

__all__ = [
    "Axiom", "AXIOMS", "axiom", "instantiate", "Direction", "L2R", "R2L",
    "Derivation", "Refl", "Sym", "Trans", "Ax", "CondAx", "Statement",
    "CheckError", "Report", "check", "run", "apply_axiom", "match",
    "subterm_at", "replace_at", "parse_script", "format_script", "search",
    "family_of", "chain",
]


class Direction(Enum):
    L2R = "L2R"
    R2L = "R2L"

    def flip(self) -> "Direction":
        return Direction.R2L if self is Direction.L2R else Direction.L2R


L2R = Direction.L2R
R2L = Direction.R2L


@dataclass(frozen=True)
class Axiom:
    name: str
    table: str  # "lattice", "concat", "mirror" or "unit"
    lhs: Expr
    rhs: Expr
    premise: Optional[tuple] = None  # (lhs, rhs) for the induction rules

    @cached_property
    def metavars(self) -> frozenset:
        mv = free_vars(self.lhs) | free_vars(self.rhs)
        if self.premise:
            mv |= free_vars(self.premise[0]) | free_vars(self.premise[1])
        return mv

    @property
    def conditional(self) -> bool:
        return self.premise is not None

    def allowed_in(self, family: Family) -> bool:
        return self.table in _TABLES[family]

    def __str__(self):
        s = f"{to_text(self.lhs)} = {to_text(self.rhs)}"
        if self.premise:
            s = f"{to_text(self.premise[0])} = {to_text(self.premise[1])} => " + s
        return s


_TABLES = {
    Family.SIMPLE: {"lattice", "concat"},
    Family.ONE_FREE: {"lattice", "concat", "mirror"},
    Family.FULL: {"lattice", "concat", "mirror", "unit"},
}

# name, table, lhs, rhs[, premise]; chained equations are split into -l / -r
_TABLE = [
    ("plus-com", "lattice", "e + f", "f + e"),
    ("plus-ass", "lattice", "e + (f + g)", "(e + f) + g"),
    ("plus-0", "lattice", "e + 0", "e"),
    ("inter-comm", "lattice", "e & f", "f & e"),
    ("inter-idem", "lattice", "e & e", "e"),
    ("inter-assoc", "lattice", "e & (f & g)", "(e & f) & g"),
    ("plus-inter", "lattice", "(e + f) & g", "e & g + f & g"),
    ("inter-plus", "lattice", "(e & f) + e", "e"),
    ("seq-assoc", "concat", "e . (f . g)", "(e . f) . g"),
    ("seq-0-l", "concat", "e . 0", "0"),
    ("seq-0-r", "concat", "0 . e", "0"),
    ("plus-seq", "concat", "(e + f) . g", "e . g + f . g"),
    ("seq-plus", "concat", "e . (f + g)", "e . f + e . g"),
    ("iter-left", "concat", "e^+", "e + e . e^+"),
    ("iter-right", "concat", "e^+", "e + e^+ . e"),
    ("left-ind", "concat", "e^+ . f + f", "f", ("e . f + f", "f")),
    ("right-ind", "concat", "f . e^+ + f", "f", ("f . e + f", "f")),
    ("conv-conv", "mirror", "e''", "e"),
    ("conv-plus", "mirror", "(e + f)'", "e' + f'"),
    ("conv-seq", "mirror", "(e . f)'", "f' . e'"),
    ("conv-inter", "mirror", "(e & f)'", "e' & f'"),
    ("conv-iter", "mirror", "e^+'", "e'^+"),
    ("seq-1-l", "unit", "1 . e", "e"),
    ("seq-1-r", "unit", "e . 1", "e"),
    ("test-seq-inter", "unit", "1 & e . f", "1 & (e & f)"),
    ("test-conv", "unit", "1 & e'", "1 & e"),
    ("test-seq-com", "unit", "(1 & e) . f", "f . (1 & e)"),
    ("test-inter", "unit", "(1 & e) . f & g", "(1 & e) . (f & g)"),
    ("test-iter", "unit", "(g + (1 & e) . f)^+", "g^+ + (1 & e) . (g + f)^+"),
]


def _mk(row):
    name, table, lhs, rhs = row[:4]
    prem = (parse(row[4][0]), parse(row[4][1])) if len(row) > 4 else None
    return Axiom(name, table, parse(lhs), parse(rhs), prem)


AXIOMS: dict = {row[0]: _mk(row) for row in _TABLE}

# axiom labels whose equation is stored as two oriented halves
SPLIT = {"seq-0": ("seq-0-l", "seq-0-r"), "seq-1": ("seq-1-l", "seq-1-r")}


def _strip(name: str) -> str:
    return name[3:] if name.startswith("ax:") else name


def axiom(name: str) -> Axiom:
    try:
        return AXIOMS[_strip(name)]
    except KeyError:
        raise KeyError(f"unknown axiom {name!r}") from None


def _bindings(b: Mapping) -> dict:
    out = {}
    for k, v in dict(b).items():
        k = k if isinstance(k, VarId) else VarId(k)
        out[k] = parse(v) if isinstance(v, str) else v
    return out


def instantiate(name: str, bindings: Mapping) -> Union[tuple, list]:
    """Concrete ``(lhs, rhs, premise)`` for an axiom; split labels give a list."""
    name = _strip(name)
    if name in SPLIT:
        return [instantiate(n, bindings) for n in SPLIT[name]]
    ax = axiom(name)
    b = _bindings(bindings)
    missing = sorted(str(m) for m in ax.metavars if m not in b)
    if missing:
        raise KeyError(f"missing binding for {', '.join(missing)} in {ax.name}")
    prem = None
    if ax.premise:
        prem = (substitute(ax.premise[0], b), substitute(ax.premise[1], b))
    return substitute(ax.lhs, b), substitute(ax.rhs, b), prem


# ---------------------------------------------------------------------------
# matching and positions


def match(pattern: Expr, term: Expr, bindings: Optional[dict] = None) -> Optional[dict]:
    """First-order syntactic matching of a schema against a term."""
    b = dict(bindings or {})
    stack = [(pattern, term)]
    while stack:
        p, t = stack.pop()
        if isinstance(p, Var):
            bound = b.get(p.id)
            if bound is None:
                b[p.id] = t
            elif bound != t:
                return None
            continue
        if type(p) is not type(t):
            return None
        pk, tk = children(p), children(t)
        stack.extend(zip(pk, tk))
    return b


def subterm_at(e: Expr, path) -> Expr:
    for i in path:
        kids = children(e)
        if not 0 <= i < len(kids):
            raise IndexError(f"path {list(path)} leaves the term")
        e = kids[i]
    return e


def replace_at(e: Expr, path, new: Expr) -> Expr:
    if not path:
        return new
    kids = list(children(e))
    i = path[0]
    if not 0 <= i < len(kids):
        raise IndexError(f"path {list(path)} leaves the term")
    kids[i] = replace_at(kids[i], path[1:], new)
    return replace_children(e, kids)


# ---------------------------------------------------------------------------
# derivations


class Derivation:
    __slots__ = ()

    def __str__(self):
        return format_script(self)


@dataclass(frozen=True)
class Refl(Derivation):
    term: Optional[Expr] = None


@dataclass(frozen=True)
class Sym(Derivation):
    inner: Derivation


@dataclass(frozen=True)
class Trans(Derivation):
    first: Derivation
    second: Derivation


@dataclass(frozen=True)
class Ax(Derivation):
    axiom: str
    direction: Direction = L2R
    at: tuple = ()
    bindings: tuple = ()  # sorted (VarId, Expr) pairs

    def __post_init__(self):
        object.__setattr__(self, "axiom", _strip(self.axiom))
        object.__setattr__(self, "at", tuple(self.at))
        if isinstance(self.bindings, Mapping):
            object.__setattr__(self, "bindings", tuple(sorted(_bindings(self.bindings).items())))


@dataclass(frozen=True)
class CondAx(Derivation):
    axiom: str
    direction: Direction
    at: tuple
    bindings: tuple
    premise: Derivation

    def __post_init__(self):
        object.__setattr__(self, "axiom", _strip(self.axiom))
        object.__setattr__(self, "at", tuple(self.at))
        if isinstance(self.bindings, Mapping):
            object.__setattr__(self, "bindings", tuple(sorted(_bindings(self.bindings).items())))


def chain(*steps: Derivation) -> Derivation:
    """Right-nested ``Trans`` of ``steps``; the empty chain is ``Refl``."""
    steps = [s for s in steps if not (isinstance(s, Refl) and s.term is None)]
    if not steps:
        return Refl()
    d = steps[-1]
    for s in reversed(steps[:-1]):
        d = Trans(s, d)
    return d


class Relation(Enum):
    EQUIV = "=="
    LEQ = "<="


def family_of(*exprs: Expr) -> Family:
    for fam in (Family.SIMPLE, Family.ONE_FREE, Family.FULL):
        if all(check_family(e, fam) for e in exprs):
            return fam
    raise ValueError("expression outside every grammar family")


@dataclass(frozen=True)
class Statement:
    relation: Relation
    lhs: Expr
    rhs: Expr
    family: Family = None

    def __post_init__(self):
        if self.family is None:
            object.__setattr__(self, "family", family_of(self.lhs, self.rhs))
        for side in (self.lhs, self.rhs):
            if not check_family(side, self.family):
                raise ValueError(f"{to_text(side)} is outside the {self.family.value} family")

    @classmethod
    def parse(cls, text: str, family: Optional[Family] = None) -> "Statement":
        for sym, rel in (("==", Relation.EQUIV), ("<=", Relation.LEQ)):
            if sym in text:
                l, r = text.split(sym, 1)
                return cls(rel, parse(l), parse(r), family)
        raise ValueError(f"statement needs '==' or '<=': {text!r}")

    @classmethod
    def equiv(cls, lhs, rhs, family=None):
        return cls(Relation.EQUIV, _e(lhs), _e(rhs), family)

    @classmethod
    def leq(cls, lhs, rhs, family=None):
        return cls(Relation.LEQ, _e(lhs), _e(rhs), family)

    @property
    def goal(self) -> tuple:
        """The equation actually proved: ``e <= f`` unfolds to ``e + f == f``."""
        if self.relation is Relation.LEQ:
            return Sum(self.lhs, self.rhs), self.rhs
        return self.lhs, self.rhs

    def __str__(self):
        return f"{to_text(self.lhs)} {self.relation.value} {to_text(self.rhs)}"


def _e(x):
    return parse(x) if isinstance(x, str) else x


class CheckError(Exception):
    def __init__(self, address: str, reason: str):
        self.address = address
        self.reason = reason
        super().__init__(f"{address}: {reason}")


@dataclass(frozen=True)
class Report:
    ok: bool
    address: Optional[str] = None
    reason: Optional[str] = None

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "ok" if self.ok else f"FAILED at {self.address}: {self.reason}"


def apply_axiom(term: Expr, name: str, direction: Direction, at=(), bindings=(),
                family: Family = Family.FULL):
    """Rewrite ``term`` at ``at``; returns ``(result, full bindings)``.

    Raises ``CheckError`` with address ``""`` on any mismatch.
    """
    try:
        ax = axiom(name)
    except KeyError as exc:
        raise CheckError("", str(exc.args[0])) from None
    if not ax.allowed_in(family):
        raise CheckError("", f"axiom {ax.name} ({ax.table}) is not available in the {family.value} family")
    try:
        sub = subterm_at(term, at)
    except IndexError as exc:
        raise CheckError("", str(exc)) from None
    src, dst = (ax.lhs, ax.rhs) if direction is L2R else (ax.rhs, ax.lhs)
    b = match(src, sub, dict(bindings))
    if b is None:
        raise CheckError("", f"{to_text(sub)} does not match {to_text(src)} ({ax.name} {direction.value})")
    missing = sorted(str(m) for m in ax.metavars if m not in b)
    if missing:
        raise CheckError("", f"missing binding for {', '.join(missing)} in {ax.name}")
    result = replace_at(term, at, substitute(dst, b))
    if not check_family(result, family):
        raise CheckError("", f"step leaves the {family.value} family: {to_text(result)}")
    return result, b


def run(d: Derivation, term: Expr, family: Family = Family.FULL,
        backward: bool = False, address: str = "root") -> Expr:
    """Follow ``d`` from ``term``; with ``backward`` the derivation is read right to left."""
    if isinstance(d, Refl):
        if d.term is not None and d.term != term:
            raise CheckError(address, f"refl of {to_text(d.term)} used on {to_text(term)}")
        return term
    if isinstance(d, Sym):
        return run(d.inner, term, family, not backward, address + ".0")
    if isinstance(d, Trans):
        if backward:
            mid = run(d.second, term, family, True, address + ".1")
            return run(d.first, mid, family, True, address + ".0")
        mid = run(d.first, term, family, False, address + ".0")
        return run(d.second, mid, family, False, address + ".1")
    if isinstance(d, (Ax, CondAx)):
        direction = d.direction.flip() if backward else d.direction
        try:
            ax = axiom(d.axiom)
        except KeyError as exc:
            raise CheckError(address, str(exc.args[0])) from None
        if isinstance(d, Ax) and ax.conditional:
            raise CheckError(address, f"{ax.name} is conditional; use cax with a premise")
        if isinstance(d, CondAx) and not ax.conditional:
            raise CheckError(address, f"{ax.name} is not conditional")
        try:
            result, b = apply_axiom(term, d.axiom, direction, d.at, d.bindings, family)
        except CheckError as exc:
            raise CheckError(address, exc.reason) from None
        if isinstance(d, CondAx):
            pl = substitute(ax.premise[0], b)
            pr = substitute(ax.premise[1], b)
            got = run(d.premise, pl, family, False, address + ".premise")
            if got != pr:
                raise CheckError(address + ".premise",
                                 f"premise proves {to_text(pl)} == {to_text(got)}, "
                                 f"needed {to_text(pl)} == {to_text(pr)}")
        return result
    raise CheckError(address, f"unknown derivation node {d!r}")


def check(d: Derivation, s: Statement) -> Report:
    lhs, rhs = s.goal
    try:
        got = run(d, lhs, s.family)
    except CheckError as exc:
        return Report(False, exc.address, exc.reason)
    if got != rhs:
        return Report(False, "root", f"derivation ends at {to_text(got)}, expected {to_text(rhs)}")
    return Report(True)


# ---------------------------------------------------------------------------
# script format
#   (trans (ax plus-com L2R at [] {e:=x, f:=0}) (ax plus-0 L2R at []))


def _fmt_bindings(bindings) -> str:
    if not bindings:
        return ""
    inner = ", ".join(f"{k}:={to_text(v)}" for k, v in bindings)
    return " {" + inner + "}"


def _flatten_trans(d):
    if isinstance(d, Trans):
        return _flatten_trans(d.first) + _flatten_trans(d.second)
    return [d]


def format_script(d: Derivation, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(d, Refl):
        return pad + ("(refl)" if d.term is None else f'(refl "{to_text(d.term)}")')
    if isinstance(d, Sym):
        return pad + "(sym\n" + format_script(d.inner, indent + 1) + ")"
    if isinstance(d, Trans):
        parts = _flatten_trans(d)
        return pad + "(trans\n" + "\n".join(format_script(p, indent + 1) for p in parts) + ")"
    path = "[" + " ".join(str(i) for i in d.at) + "]"
    head = f"{d.axiom} {d.direction.value} at {path}{_fmt_bindings(d.bindings)}"
    if isinstance(d, Ax):
        return pad + f"(ax {head})"
    return pad + f"(cax {head}\n" + format_script(d.premise, indent + 1) + ")"


_SCRIPT_TOKEN = re.compile(r'\s*(?:(;[^\n]*)|(\()|(\))|(\[[^\]]*\])|(\{[^}]*\})|("[^"]*")|([^\s()\[\]{}"]+))')


class ScriptError(ValueError):
    pass


def _script_tokens(text):
    pos = 0
    out = []
    while pos < len(text):
        m = _SCRIPT_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ScriptError(f"bad script syntax at offset {pos}")
        pos = m.end()
        if m.group(1):
            continue
        for kind, g in zip(("(", ")", "path", "binds", "str", "word"), m.groups()[1:]):
            if g is not None:
                out.append((kind, g, m.start(m.lastindex)))
                break
    return out


def parse_script(text: str) -> Derivation:
    toks = _script_tokens(text)
    pos = 0

    def expect(kind):
        nonlocal pos
        if pos >= len(toks) or toks[pos][0] != kind:
            where = toks[pos][2] if pos < len(toks) else len(text)
            raise ScriptError(f"expected {kind} at offset {where}")
        pos += 1
        return toks[pos - 1][1]

    def node():
        nonlocal pos
        expect("(")
        kind = expect("word")
        if kind == "refl":
            term = None
            if pos < len(toks) and toks[pos][0] == "str":
                term = parse(expect("str")[1:-1], allow_reserved=True)
            expect(")")
            return Refl(term)
        if kind == "sym":
            d = node()
            expect(")")
            return Sym(d)
        if kind == "trans":
            parts = [node()]
            while pos < len(toks) and toks[pos][0] == "(":
                parts.append(node())
            expect(")")
            if len(parts) < 2:
                raise ScriptError("trans needs at least two derivations")
            return chain(*parts)
        if kind in ("ax", "cax"):
            name = expect("word")
            try:
                direction = Direction(expect("word"))
            except ValueError:
                raise ScriptError("direction must be L2R or R2L") from None
            if expect("word") != "at":
                raise ScriptError("expected 'at'")
            raw = expect("path")[1:-1].replace(",", " ").split()
            try:
                path = tuple(int(i) for i in raw)
            except ValueError:
                raise ScriptError(f"path must list child indices, got [{' '.join(raw)}]") from None
            bindings = {}
            if pos < len(toks) and toks[pos][0] == "binds":
                body = expect("binds")[1:-1]
                for item in filter(None, (s.strip() for s in body.split(","))):
                    if ":=" not in item:
                        raise ScriptError(f"binding {item!r} lacks ':='")
                    k, v = item.split(":=", 1)
                    bindings[VarId(k.strip())] = parse(v, allow_reserved=True)
            if kind == "ax":
                expect(")")
                return Ax(name, direction, path, bindings)
            prem = node()
            expect(")")
            return CondAx(name, direction, path, bindings, prem)
        raise ScriptError(f"unknown node kind {kind!r}")

    d = node()
    if pos != len(toks):
        raise ScriptError("trailing input after derivation")
    return d


# ---------------------------------------------------------------------------
# bounded proof search


_ORDER = {(ax, d): i for i, (ax, d) in
          enumerate((a, d) for a in AXIOMS.values() for d in (L2R, R2L))}

_PREMISE_ORACLE = None


def _semantically_false(lhs, rhs) -> bool:
    """Cheap model check used to skip premises that cannot be derived."""
    global _PREMISE_ORACLE
    from .semantics import OracleConfig, equiv_bounded
    if _PREMISE_ORACLE is None:
        _PREMISE_ORACLE = OracleConfig(trials=0, tiny_bound=2, exhaustive_cap=300, shrink=False)
    return equiv_bounded(lhs, rhs, _PREMISE_ORACLE).refuted


def _orientations(family, conditional):
    out = []
    for ax in AXIOMS.values():
        if not ax.allowed_in(family):
            continue
        if ax.conditional:
            # only the reductive direction; R2L would guess e from the pool
            if conditional:
                out.append((ax, L2R))
            continue
        out.append((ax, L2R))
        out.append((ax, R2L))
    return out


def _pool(s: Statement):
    lhs, rhs = s.goal
    seen = {}
    for side in (lhs, rhs):
        for _, t in subterms(side):
            seen[t] = None
    seen[ZERO] = None
    if s.family is Family.FULL:
        seen[ONE] = None
    return sorted(seen, key=lambda t: (size(t), to_text(t)))


class _Searcher:
    def __init__(self, family, size_cap, conditional, cond_depth, pool):
        self.family = family
        self.size_cap = size_cap
        self.conditional = conditional
        self.cond_depth = cond_depth
        self.pool = pool
        self.by_head = {}
        self.generic = []
        for ax, direction in _orientations(family, conditional):
            src = ax.lhs if direction is L2R else ax.rhs
            if isinstance(src, Var):
                self.generic.append((ax, direction))
            else:
                self.by_head.setdefault(type(src), []).append((ax, direction))
        self.premise_cache = {}

    def _candidates(self, sub):
        # keep table order so that search results stay deterministic
        own = self.by_head.get(type(sub), [])
        if not self.generic:
            return own
        return sorted(own + self.generic, key=_ORDER.__getitem__)

    def successors(self, term):
        for path, sub in subterms(term):
            for ax, direction in self._candidates(sub):
                src, dst = (ax.lhs, ax.rhs) if direction is L2R else (ax.rhs, ax.lhs)
                b = match(src, sub)
                if b is None:
                    continue
                free = sorted(m for m in ax.metavars if m not in b)
                for extra in _assignments(free, self.pool):
                    full = dict(b)
                    full.update(extra)
                    new = replace_at(term, path, substitute(dst, full))
                    if size(new) > self.size_cap or not check_family(new, self.family):
                        continue
                    step_b = tuple(sorted(extra.items()))
                    if ax.conditional:
                        prem = self.prove_premise(ax, full)
                        if prem is None:
                            continue
                        yield new, CondAx(ax.name, direction, path, step_b, prem)
                    else:
                        yield new, Ax(ax.name, direction, path, step_b)

    def prove_premise(self, ax, b):
        pl = substitute(ax.premise[0], b)
        pr = substitute(ax.premise[1], b)
        key = (pl, pr)
        if key not in self.premise_cache and _semantically_false(pl, pr):
            self.premise_cache[key] = None
        if key not in self.premise_cache:
            inner = _Searcher(self.family, self.size_cap, False, 0, self.pool)
            self.premise_cache[key] = inner.bidirectional(pl, pr, self.cond_depth)
        return self.premise_cache[key]

    def bidirectional(self, lhs, rhs, depth):
        if lhs == rhs:
            return Refl()
        # parent maps: term -> (previous term, step)
        fwd = {lhs: None}
        bwd = {rhs: None}
        f_front, b_front = [lhs], [rhs]
        f_depth = b_depth = 0
        while f_depth + b_depth < depth:
            grow_forward = f_depth <= b_depth
            front, seen, other = (f_front, fwd, bwd) if grow_forward else (b_front, bwd, fwd)
            nxt = []
            for t in front:
                for new, step in self.successors(t):
                    if new in seen:
                        continue
                    seen[new] = (t, step)
                    nxt.append(new)
                    if new in other:
                        return self._assemble(fwd, bwd, new)
            if grow_forward:
                f_front, f_depth = nxt, f_depth + 1
            else:
                b_front, b_depth = nxt, b_depth + 1
            if not nxt:
                break
        return None

    @staticmethod
    def _assemble(fwd, bwd, meet):
        steps = []
        t = meet
        while fwd[t] is not None:
            prev, step = fwd[t]
            steps.append(step)
            t = prev
        steps.reverse()
        back = []
        t = meet
        while bwd[t] is not None:
            prev, step = bwd[t]
            back.append(Sym(step))
            t = prev
        return chain(*steps, *back)


def _assignments(free, pool):
    if not free:
        yield {}
        return
    head, rest = free[0], free[1:]
    for t in pool:
        for tail in _assignments(rest, pool):
            d = {head: t}
            d.update(tail)
            yield d


def search(s: Statement, depth: int = 4, size_cap: int = 40, conditional: bool = False,
           cond_depth: int = 3) -> Optional[Derivation]:
    """Bidirectional breadth-first search for a derivation of ``s``.

    Unbound metavariables of a rewrite (``0 -> e . 0``) range over the
    subterms of the statement plus the constants. With ``conditional`` the
    induction rules are tried left to right only, each premise searched up to
    ``cond_depth`` steps. Returns ``None`` when nothing is found; this says
    nothing about derivability.
    """
    lhs, rhs = s.goal
    searcher = _Searcher(s.family, size_cap, conditional, cond_depth, _pool(s))
    d = searcher.bidirectional(lhs, rhs, depth)
    if d is not None:
        assert check(d, s).ok, "search produced an unchecked derivation"
    return d
