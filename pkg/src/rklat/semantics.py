"""Finite-language model and the bounded refutation oracle.

Words are Python strings whose characters are letters; a language is a
``frozenset`` of words. Every operator of the signature is length-monotone,
so evaluating with all words longer than a bound ``L`` discarded gives exactly
the true language restricted to words of length at most ``L``.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional

from .syntax import (
    Expr, Inter, Mirror, One, Plus, Prod, Sum, Top, Var, VarId, Zero,
    free_vars, parse,
)

BULLET = "@"
EPS = ""
DEFAULT_LETTERS = "abcdefghijklmnopqrstuvwxyz"

Language = frozenset


def mirror_word(u: str) -> str:
    return u[::-1]


def lang_mirror(lang: Iterable[str]) -> frozenset:
    return frozenset(u[::-1] for u in lang)


def lang_concat(left: Iterable[str], right: Iterable[str], bound: int) -> frozenset:
    right = list(right)
    out = set()
    for u in left:
        room = bound - len(u)
        if room < 0:
            continue
        for v in right:
            if len(v) <= room:
                out.add(u + v)
    return frozenset(out)


def lang_plus(lang: Iterable[str], bound: int) -> frozenset:
    """Non-zero iteration of ``lang`` restricted to words of length <= bound."""
    base = frozenset(u for u in lang if len(u) <= bound)
    result = set(base)
    frontier = set(base)
    # ε in base contributes nothing new; iteration stops on a stable set
    while frontier:
        new = lang_concat(frontier, base, bound) - result
        result |= new
        frontier = new
    return frozenset(result)


def restrict(lang: Iterable[str], bound: int) -> frozenset:
    return frozenset(u for u in lang if len(u) <= bound)


class UnboundVariable(KeyError):
    pass


@dataclass(frozen=True)
class Interpretation:
    """Assignment of finite languages to variables, exact up to ``bound``."""

    alphabet: tuple
    bound: int
    values: Mapping[VarId, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(sorted(set(self.alphabet))))
        vals = {k: frozenset(v) for k, v in dict(self.values).items()}
        object.__setattr__(self, "values", vals)
        letters = set(self.alphabet)
        for x, lang in vals.items():
            for u in lang:
                if len(u) > self.bound:
                    raise ValueError(f"word {u!r} of {x} exceeds bound {self.bound}")
                if not set(u) <= letters:
                    raise ValueError(f"word {u!r} of {x} uses letters outside {self.alphabet}")

    def __getitem__(self, x: VarId) -> frozenset:
        try:
            return self.values[x]
        except KeyError:
            raise UnboundVariable(x) from None

    def __hash__(self):
        return hash((self.alphabet, self.bound, frozenset(self.values.items())))

    def __eq__(self, other):
        return (isinstance(other, Interpretation) and self.alphabet == other.alphabet
                and self.bound == other.bound and self.values == other.values)

    @property
    def variables(self) -> frozenset:
        return frozenset(self.values)

    def with_bound(self, bound: int) -> "Interpretation":
        return Interpretation(self.alphabet, bound,
                              {x: restrict(l, bound) for x, l in self.values.items()})

    def updated(self, **changes) -> "Interpretation":
        vals = dict(self.values)
        vals.update(changes.get("values", {}))
        return Interpretation(changes.get("alphabet", self.alphabet),
                              changes.get("bound", self.bound), vals)

    def is_epsilon_free(self) -> bool:
        return all(EPS not in l for l in self.values.values())

    def to_text(self) -> str:
        return format_interpretation(self)

    def __str__(self):
        return format_interpretation(self)


def evaluate(e: Expr, sigma: Interpretation, bound: Optional[int] = None) -> frozenset:
    """Language of ``e`` under ``sigma``, restricted to words of length <= bound."""
    if bound is None:
        bound = sigma.bound
    memo: dict = {}

    def go(t):
        hit = memo.get(t)
        if hit is not None:
            return hit
        if isinstance(t, Var):
            r = restrict(sigma[t.id], bound)
        elif isinstance(t, Zero):
            r = frozenset()
        elif isinstance(t, One):
            r = frozenset([EPS])
        elif isinstance(t, Sum):
            r = go(t.left) | go(t.right)
        elif isinstance(t, Inter):
            r = go(t.left) & go(t.right)
        elif isinstance(t, Prod):
            left = go(t.left)
            r = lang_concat(left, go(t.right), bound) if left else frozenset()
        elif isinstance(t, Plus):
            r = lang_plus(go(t.arg), bound)
        elif isinstance(t, Mirror):
            r = lang_mirror(go(t.arg))
        elif isinstance(t, Top):
            raise TypeError("top has no finite denotation; eliminate it first")
        else:
            raise TypeError(f"not an expression: {t!r}")
        memo[t] = r
        return r

    return go(e)


def sigma_A(tested: Iterable[VarId], variables: Iterable[VarId]) -> Interpretation:
    """Map members of ``tested`` to {ε} and every other variable to ∅."""
    tested = frozenset(tested)
    variables = frozenset(variables)
    if not tested <= variables:
        raise ValueError(f"{sorted(map(str, tested - variables))} not among the variables")
    return Interpretation((), 0, {x: frozenset([EPS]) if x in tested else frozenset()
                                  for x in variables})


# ---------------------------------------------------------------------------
# interpretation generation


@dataclass(frozen=True)
class OracleConfig:
    alphabet_size: int = 2
    bound: int = 6
    words_per_var: int = 4
    trials: int = 200
    seed: int = 0
    epsilon_free: bool = False
    slack: int = 3
    # exhaustive tier: every (alphabet, bound) level inside this box whose
    # full enumeration has at most exhaustive_cap interpretations
    exhaustive: bool = True
    tiny_alphabet: int = 2
    tiny_bound: int = 3
    tiny_words: int = 2
    exhaustive_cap: int = 25_000
    shrink: bool = True

    def __post_init__(self):
        for name in ("alphabet_size", "words_per_var", "slack", "tiny_alphabet", "tiny_words"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        for name in ("bound", "trials", "tiny_bound", "exhaustive_cap"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")


def words_upto(alphabet: Iterable[str], bound: int, min_len: int = 0) -> list:
    alphabet = sorted(alphabet)
    out = []
    for n in range(min_len, bound + 1):
        out.extend("".join(p) for p in itertools.product(alphabet, repeat=n))
    return out


def small_languages(alphabet, bound, max_words, epsilon_free=False) -> list:
    """All languages of at most ``max_words`` words of length <= bound."""
    words = words_upto(alphabet, bound, 1 if epsilon_free else 0)
    langs = []
    for k in range(max_words + 1):
        langs.extend(frozenset(c) for c in itertools.combinations(words, k))
    return langs


def _exhaustive_levels(n_vars, cfg):
    levels = []
    for k in range(1, cfg.tiny_alphabet + 1):
        for L in range(0, cfg.tiny_bound + 1):
            langs = small_languages(DEFAULT_LETTERS[:k], L, cfg.tiny_words, cfg.epsilon_free)
            count = len(langs) ** n_vars
            if count <= cfg.exhaustive_cap:
                levels.append((count, k, L, langs))
    levels.sort(key=lambda t: (t[0], t[1], t[2]))
    return levels


def exhaustive_interpretations(variables, cfg: OracleConfig) -> Iterator[Interpretation]:
    variables = sorted(variables)
    seen = set()
    for _, k, L, langs in _exhaustive_levels(len(variables), cfg):
        alphabet = tuple(DEFAULT_LETTERS[:k])
        for combo in itertools.product(langs, repeat=len(variables)):
            if combo in seen:
                continue
            seen.add(combo)
            yield Interpretation(alphabet, cfg.tiny_bound, dict(zip(variables, combo)))


def _random_word(rng, alphabet, bound, min_len):
    # shorter words are likelier so that products stay under the bound
    lengths = list(range(min_len, bound + 1))
    if not lengths:
        return None
    weights = [1.0 / (1 + n) for n in lengths]
    n = rng.choices(lengths, weights)[0]
    return "".join(rng.choice(alphabet) for _ in range(n))


def random_interpretation(variables, cfg: OracleConfig, rng: random.Random) -> Interpretation:
    alphabet = DEFAULT_LETTERS[:cfg.alphabet_size]
    min_len = 1 if cfg.epsilon_free else 0
    vals = {}
    for x in sorted(variables):
        count = rng.randint(0, cfg.words_per_var)
        words = set()
        for _ in range(count):
            w = _random_word(rng, alphabet, cfg.bound, min_len)
            if w is not None:
                words.add(w)
        vals[x] = frozenset(words)
    return Interpretation(tuple(alphabet), cfg.bound, vals)


def gen_interpretations(variables, cfg: OracleConfig = OracleConfig()) -> Iterator[Interpretation]:
    """Exhaustive tiny tier followed by ``cfg.trials`` seeded random samples."""
    variables = frozenset(variables)
    if cfg.exhaustive:
        yield from exhaustive_interpretations(variables, cfg)
    rng = random.Random(cfg.seed)
    for _ in range(cfg.trials):
        yield random_interpretation(variables, cfg, rng)


# ---------------------------------------------------------------------------
# refutation


@dataclass(frozen=True)
class CounterExample:
    sigma: Interpretation
    witness: str
    direction: str = "<="  # "<=" : witness in lhs only; ">=" : in rhs only

    def describe(self) -> str:
        w = self.witness if self.witness else "_"
        return f"witness {w} with {format_interpretation(self.sigma, inline=True)}"


@dataclass(frozen=True)
class Verdict:
    counterexample: Optional[CounterExample] = None

    @property
    def refuted(self) -> bool:
        return self.counterexample is not None

    def __str__(self):
        if self.counterexample is None:
            return "UNREFUTED"
        return f"REFUTED({self.counterexample.describe()})"


def _shortlex(u):
    return (len(u), u)


def _witnesses(e, f, sigma):
    return evaluate(e, sigma) - evaluate(f, sigma)


def shrink(e: Expr, f: Expr, sigma: Interpretation, epsilon_free: bool = False) -> Interpretation:
    """Drop words, then shorten words, while some witness of e ⊄ f survives."""
    def alive(s):
        return bool(_witnesses(e, f, s))

    changed = True
    while changed:
        changed = False
        for x in sorted(sigma.values):
            for u in sorted(sigma.values[x], key=_shortlex, reverse=True):
                cand = sigma.updated(values={x: sigma.values[x] - {u}})
                if alive(cand):
                    sigma, changed = cand, True
        for x in sorted(sigma.values):
            for u in sorted(sigma.values[x], key=_shortlex, reverse=True):
                if u not in sigma.values[x]:
                    continue
                for i in range(len(u)):
                    v = u[:i] + u[i + 1:]
                    if epsilon_free and not v:
                        continue
                    cand = sigma.updated(values={x: (sigma.values[x] - {u}) | {v}})
                    if alive(cand):
                        sigma, changed = cand, True
                        break
    return sigma


def refute(e: Expr, f: Expr, cfg: OracleConfig = OracleConfig(),
           variables: Optional[Iterable[VarId]] = None) -> Optional[CounterExample]:
    """Search for σ with ⟦e⟧ ⊄ ⟦f⟧; None means nothing was found (not validity)."""
    xs = frozenset(variables) if variables is not None else free_vars(e) | free_vars(f)
    for sigma in gen_interpretations(xs, cfg):
        if _witnesses(e, f, sigma):
            if cfg.shrink:
                sigma = shrink(e, f, sigma, cfg.epsilon_free)
            witness = min(_witnesses(e, f, sigma), key=_shortlex)
            # recheck before reporting
            assert witness in evaluate(e, sigma) and witness not in evaluate(f, sigma)
            return CounterExample(sigma, witness)
    return None


def equiv_bounded(e: Expr, f: Expr, cfg: OracleConfig = OracleConfig()) -> Verdict:
    xs = free_vars(e) | free_vars(f)
    cex = refute(e, f, cfg, xs)
    if cex is None:
        cex = refute(f, e, cfg, xs)
        if cex is not None:
            cex = CounterExample(cex.sigma, cex.witness, ">=")
    return Verdict(cex)


def leq_bounded(e: Expr, f: Expr, cfg: OracleConfig = OracleConfig()) -> Verdict:
    return Verdict(refute(e, f, cfg))


# ---------------------------------------------------------------------------
# text format:  alphabet = { a, b }   bound = 6   x = { ab, ba, _ }


def _word_text(u: str) -> str:
    return u if u else "_"


def format_interpretation(sigma: Interpretation, inline: bool = False) -> str:
    lines = ["alphabet = { " + ", ".join(sigma.alphabet) + " }" if sigma.alphabet else "alphabet = { }",
             f"bound = {sigma.bound}"]
    for x in sorted(sigma.values):
        words = sorted(sigma.values[x], key=_shortlex)
        body = ", ".join(_word_text(u) for u in words)
        lines.append(f"{x} = {{ {body} }}" if words else f"{x} = {{ }}")
    return "; ".join(lines) if inline else "\n".join(lines) + "\n"


_BINDING = re.compile(r"^\s*([A-Za-z0-9_]+(?:!f|!b)?)\s*=\s*(.*?)\s*$")


def parse_interpretation(text: str) -> Interpretation:
    alphabet = None
    bound = None
    values = {}
    for lineno, raw in enumerate(re.split(r"[\n;]", text), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _BINDING.match(line)
        if not m:
            raise ValueError(f"line {lineno}: expected 'name = value', got {raw!r}")
        name, rhs = m.groups()
        if name == "bound":
            bound = int(rhs)
            continue
        if not (rhs.startswith("{") and rhs.endswith("}")):
            raise ValueError(f"line {lineno}: expected a braced set for {name}")
        items = [t.strip() for t in rhs[1:-1].split(",") if t.strip()]
        words = frozenset("" if t == "_" else t for t in items)
        if name == "alphabet":
            alphabet = tuple(words)
            continue
        v = parse(name, allow_reserved=True)
        if not isinstance(v, Var):
            raise ValueError(f"line {lineno}: {name!r} is not a variable")
        values[v.id] = words
    if alphabet is None:
        alphabet = tuple(sorted({c for l in values.values() for u in l for c in u}))
    if bound is None:
        bound = max((len(u) for l in values.values() for u in l), default=0)
    return Interpretation(alphabet, bound, values)


def refute_implication(premise: tuple, conclusion: tuple, cfg: OracleConfig = OracleConfig()):
    """Search for σ satisfying the premise equation but not the conclusion.

    Returns ``(counterexample or None, number of σ satisfying the premise)``.
    Bounded evaluation is exact here: if the premise holds on words up to L,
    so do the induction conclusions on words up to L.
    """
    (pl, pr), (cl, cr) = premise, conclusion
    xs = free_vars(pl) | free_vars(pr) | free_vars(cl) | free_vars(cr)
    hits = 0
    for sigma in gen_interpretations(xs, cfg):
        if evaluate(pl, sigma) != evaluate(pr, sigma):
            continue
        hits += 1
        lhs, rhs = evaluate(cl, sigma), evaluate(cr, sigma)
        if lhs != rhs:
            diff = (lhs - rhs) or (rhs - lhs)
            side = "<=" if lhs - rhs else ">="
            return CounterExample(sigma, min(diff, key=_shortlex), side), hits
    return None, hits
