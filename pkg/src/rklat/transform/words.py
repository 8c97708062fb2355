"""Bullet words: erasure, the insertion order, and interpretation builders.

Words over the extended alphabet use ``@`` as the bullet.
"""

from __future__ import annotations

import itertools
from collections import deque
from typing import Iterable, Optional

from ..semantics import BULLET, EPS, Interpretation, mirror_word
from ..syntax import VarId


def erase(u: str) -> str:
    return u.replace(BULLET, "")


def eta(u: str) -> str:
    """Prefix every letter with a bullet: ``ab`` becomes ``@a@b``."""
    if BULLET in u:
        raise ValueError(f"eta expects a bullet-free word, got {u!r}")
    return "".join(BULLET + c for c in u)


def eta_inverse(w: str) -> Optional[str]:
    if len(w) % 2:
        return None
    if any(c != BULLET for c in w[0::2]) or BULLET in w[1::2]:
        return None
    return w[1::2]


def psi(lang: Iterable[str]) -> frozenset:
    """Words whose eta-image lies in ``lang``."""
    out = set()
    for w in lang:
        u = eta_inverse(w)
        if u is not None:
            out.add(u)
    return frozenset(out)


def word_leq(u: str, v: str) -> bool:
    """True iff ``v`` arises from ``u`` by inserting bullets."""
    i = 0
    for c in v:
        if i < len(u) and u[i] == c:
            i += 1
        elif c != BULLET:
            return False
    return i == len(u)


def bullet_runs(u: str) -> tuple:
    """Bullet counts before, between and after the letters of ``u``."""
    runs = [0]
    for c in u:
        if c == BULLET:
            runs[-1] += 1
        else:
            runs.append(0)
    return tuple(runs)


def _from_runs(letters: str, runs) -> str:
    out = [BULLET * runs[0]]
    for c, r in zip(letters, runs[1:]):
        out.append(c + BULLET * r)
    return "".join(out)


def word_join(u: str, v: str) -> Optional[str]:
    """Least common upper bound for the insertion order; None if the
    erasures differ (no upper bound exists)."""
    if erase(u) != erase(v):
        return None
    runs = [max(a, b) for a, b in zip(bullet_runs(u), bullet_runs(v))]
    return _from_runs(erase(u), runs)


def is_valid_word(u: str) -> bool:
    """Nonempty product of blocks ``letter bullet`` or ``bullet letter``."""
    if not u or len(u) % 2:
        return False
    for i in range(0, len(u), 2):
        a, b = u[i], u[i + 1]
        if (a == BULLET) == (b == BULLET):
            return False
    return True


def insertions(u: str, extra: int) -> Iterable[str]:
    """Every word obtained from ``u`` by inserting at most ``extra`` bullets."""
    gaps = len(u) + 1
    for k in range(extra + 1):
        for combo in itertools.combinations_with_replacement(range(gaps), k):
            runs = [0] * gaps
            for g in combo:
                runs[g] += 1
            yield _from_runs(u, runs)


def build_sigma_prime(sigma: Interpretation, nonempty: Iterable[VarId],
                      budget: int) -> Interpretation:
    """Bullet-padded interpretation, truncated to words of length <= budget.

    Each variable gets every word whose erasure is in its language; variables
    in ``nonempty`` lose the empty word.
    """
    if BULLET in sigma.alphabet:
        raise ValueError("the base alphabet already contains the bullet")
    nonempty = frozenset(nonempty)
    values = {}
    for x, lang in sigma.values.items():
        image = set()
        for w in lang:
            if len(w) <= budget:
                image.update(insertions(w, budget - len(w)))
        if x in nonempty:
            image.discard(EPS)
        values[x] = frozenset(image)
    return Interpretation(sigma.alphabet + (BULLET,), budget, values)


def build_sigma_dblprime(sigma: Interpretation) -> Interpretation:
    """Merge a directed interpretation into one over base variables, with
    forward words encoded by eta and mirrored words by mirrored eta.

    The bound doubles since eta doubles lengths.
    """
    if BULLET in sigma.alphabet:
        raise ValueError("the base alphabet already contains the bullet")
    values: dict = {}
    for x, lang in sigma.values.items():
        if x.direction is None:
            raise ValueError(f"variable {x} carries no direction")
        if EPS in lang:
            raise ValueError(f"the empty word is in the image of {x}")
        enc = (eta(u) if x.direction == "f" else mirror_word(eta(u)) for u in lang)
        values.setdefault(x.base, set()).update(enc)
    return Interpretation(sigma.alphabet + (BULLET,), 2 * sigma.bound,
                          {x: frozenset(v) for x, v in values.items()})


def is_closed(lang: Iterable[str], budget: int) -> bool:
    """Upward closure for the insertion order, within words of length <= budget."""
    lang = frozenset(lang)
    for u in lang:
        for pos in range(len(u) + 1):
            v = u[:pos] + BULLET + u[pos:]
            if len(v) <= budget and v not in lang:
                return False
    return True


def closure(lang: Iterable[str], budget: int) -> frozenset:
    out = set()
    for u in lang:
        if len(u) <= budget:
            out.update(insertions(u, budget - len(u)))
    return frozenset(out)


# ---------------------------------------------------------------------------
# reference implementation: closure of the four inference rules


def rule_closure(alphabet: Iterable[str], max_len: int) -> frozenset:
    """All pairs (u, v) with |v| <= max_len derivable from reflexivity,
    ``u <= @u``, transitivity and concatenation.

    Only meant for cross-checking ``word_leq`` on small universes.
    """
    letters = sorted(set(alphabet) | {BULLET})
    universe = [""]
    for n in range(1, max_len + 1):
        universe.extend("".join(p) for p in itertools.product(letters, repeat=n))
    rel = set()
    queue = deque()

    def add(p):
        if p not in rel:
            rel.add(p)
            queue.append(p)

    for u in universe:
        add((u, u))
        if len(u) < max_len:
            add((u, BULLET + u))
    by_lo: dict = {}
    by_hi: dict = {}
    while queue:
        p = queue.popleft()
        u, v = p
        by_lo.setdefault(u, set()).add(p)
        by_hi.setdefault(v, set()).add(p)
        # transitivity in both positions
        for _, w in list(by_lo.get(v, ())):
            add((u, w))
        for t, _ in list(by_hi.get(u, ())):
            add((t, v))
        # concatenation with every known pair, on either side
        for (u2, v2) in list(rel):
            if len(v) + len(v2) <= max_len:
                add((u + u2, v + v2))
                add((u2 + u, v2 + v))
    return frozenset(rel)
