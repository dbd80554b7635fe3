"""Lower/upper/total shadows, the complement bijection, and Kruskal-Katona minima."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable

from .orders import OrderKind, iterate
from .setcore import DomainError, card, full, labels_of, mask_of, submasks

# above this many members the inclusion-exclusion count costs more than
# walking the subsets of the support directly
INCLUSION_EXCLUSION_LIMIT = 14


@dataclass(frozen=True)
class UniformFamily:
    r: int
    members: frozenset
    p: int

    def __init__(self, members: Iterable[int], r: int, p: int):
        members = frozenset(int(m) for m in members)
        if r < 0 or p < 0:
            raise DomainError("r and p must be non-negative")
        universe = full(p)
        for m in members:
            if card(m) != r or m & ~universe:
                raise DomainError(f"member {labels_of(m)} is not an {r}-subset of [{p}]")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "p", p)

    @classmethod
    def from_lists(cls, lists: Iterable[Iterable[int]], r: int, p: int) -> "UniformFamily":
        return cls((mask_of(x) for x in lists), r, p)

    def __len__(self) -> int:
        return len(self.members)

    def sorted_members(self) -> list[int]:
        return sorted(self.members)


def lower_shadow(fam: UniformFamily) -> UniformFamily:
    if fam.r == 0:
        raise DomainError("the lower shadow of 0-sets is undefined")
    out = set()
    for a in fam.members:
        x = a
        while x:
            low = x & -x
            out.add(a ^ low)
            x ^= low
    return UniformFamily(out, fam.r - 1, fam.p)


def upper_shadow(fam: UniformFamily, times: int = 1) -> UniformFamily:
    """Apply the upper shadow within [p] ``times`` times."""
    if times < 0:
        raise DomainError("times must be non-negative")
    if fam.r + times > fam.p:
        raise DomainError(f"cannot raise {fam.r}-sets {times} times inside [{fam.p}]")
    universe = full(fam.p)
    members = set(fam.members)
    for _ in range(times):
        nxt = set()
        for a in members:
            free = universe & ~a
            while free:
                low = free & -free
                nxt.add(a | low)
                free ^= low
        members = nxt
    return UniformFamily(members, fam.r + times, fam.p)


def _minimal(members: Iterable[int]) -> list[int]:
    ms = sorted(set(members), key=card)
    keep: list[int] = []
    for m in ms:
        if not any(k & ~m == 0 for k in keep):
            keep.append(m)
    return keep


def _count_inclusion_exclusion(gens: list[int], p: int) -> int:
    total = 0
    n = len(gens)
    def rec(i: int, union: int, size: int) -> None:
        nonlocal total
        if i == n:
            if size:
                sign = 1 if size % 2 else -1
                total += sign * (1 << (p - card(union)))
            return
        rec(i + 1, union, size)
        rec(i + 1, union | gens[i], size + 1)

    rec(0, 0, 0)
    return total


def _count_direct(gens: list[int], p: int) -> int:
    support = 0
    for g in gens:
        support |= g
    inside = 0
    for sub in submasks(support):
        if any(g & ~sub == 0 for g in gens):
            inside += 1
    return inside << (p - card(support))


def total_upper_shadow_count(members: Iterable[int], p: int, method: str = "auto") -> int:
    """|{A subset of [p] : A contains some member}| without listing the sets."""
    gens = _minimal(members)
    if not gens:
        return 0
    if any(g & ~full(p) for g in gens):
        raise DomainError(f"members must lie inside [{p}]")
    if method == "auto":
        method = "inclusion-exclusion" if len(gens) <= INCLUSION_EXCLUSION_LIMIT else "direct"
    if method == "inclusion-exclusion":
        return _count_inclusion_exclusion(gens, p)
    if method == "direct":
        return _count_direct(gens, p)
    raise DomainError(f"unknown counting method {method!r}")


def total_upper_shadow(fam: UniformFamily, materialize: bool = False) -> tuple[int, list[int] | None]:
    """Count (and optionally list, ascending) every superset of a member inside [p]."""
    count = total_upper_shadow_count(fam.members, fam.p)
    if not materialize:
        return count, None
    universe = full(fam.p)
    out = set()
    for g in _minimal(fam.members):
        for extra in submasks(universe & ~g):
            out.add(g | extra)
    listed = sorted(out)
    assert len(listed) == count
    return count, listed


def reverse_labels(mask: int, p: int) -> int:
    """Image of ``mask`` under i -> p + 1 - i."""
    out = 0
    for x in labels_of(mask):
        out |= 1 << (p + 1 - x)
    return out


def complement_map(mask: int, p: int) -> int:
    return reverse_labels(full(p) & ~mask, p)


def complement_transform(fam: UniformFamily) -> UniformFamily:
    """A -> g(A^c) with g(i) = p + 1 - i; turns lex segments into colex ones."""
    return UniformFamily((complement_map(a, fam.p) for a in fam.members), fam.p - fam.r, fam.p)


def lex_segment(m: int, r: int, p: int) -> UniformFamily:
    if not 0 <= m <= comb(p, r):
        raise DomainError(f"segment length {m} outside 0..C({p},{r})")
    if r == 0:
        return UniformFamily([0] if m else [], 0, p)
    it = iterate(OrderKind.LEX, r, p)
    return UniformFamily((next(it) for _ in range(m)), r, p)


def kk_min_upper_shadow(m: int, r: int, p: int) -> int:
    """Least possible |upper shadow| of m r-subsets of [p] (lex segment's shadow)."""
    if r >= p:
        raise DomainError(f"no upper shadow for {r}-sets inside [{p}]")
    return len(upper_shadow(lex_segment(m, r, p)))


def delta_proportion(s: int, k: int, t: int) -> Fraction:
    """Share of subsets of [t] above the lex segment of length s on [t]^(k-1)."""
    if k < 1:
        raise DomainError("k must be at least 1")
    if not 0 <= s <= comb(t, k - 1):
        raise DomainError(f"s = {s} outside 0..C({t},{k - 1})")
    seg = lex_segment(s, k - 1, t)
    return Fraction(total_upper_shadow_count(seg.members, t), 1 << t)


def is_lex_segment(fam: UniformFamily) -> bool:
    if fam.r == 0:
        return len(fam.members) <= 1
    want = set()
    for combo in combinations(range(1, fam.p + 1), fam.r):
        if len(want) == len(fam.members):
            break
        want.add(mask_of(combo))
    return want == set(fam.members)


def cascade(m: int, q: int) -> list[tuple[int, int]]:
    """The q-cascade m = C(a_q, q) + C(a_{q-1}, q-1) + ..., a_q > a_{q-1} > ..."""
    out = []
    while m > 0 and q > 0:
        a = q
        while comb(a + 1, q) <= m:
            a += 1
        out.append((a, q))
        m -= comb(a, q)
        q -= 1
    return out


def cascade_upper_shadow(m: int, r: int, p: int) -> int:
    """|upper shadow of the lex segment| from the cascade form of Kruskal-Katona.

    Through the complement map the lex segment becomes a colex segment of
    (p - r)-sets, whose lower shadow has size sum C(a_i, i - 1).
    """
    if r >= p:
        raise DomainError(f"no upper shadow for {r}-sets inside [{p}]")
    if m == 0:
        return 0
    return sum(comb(a, i - 1) for a, i in cascade(m, p - r))
