"""Union-closed families generated by k-sets, blockers, and the constructive
lower bounds on their size."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .setcore import DomainError, Family, card, labels_of, submasks


class PreconditionError(DomainError):
    """Hypothesis of a constructive statement does not hold."""


@dataclass(frozen=True)
class ClosureFamily:
    members: frozenset
    source: Family

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, s: int) -> bool:
        return s in self.members

    def sorted_members(self) -> list[int]:
        return sorted(self.members)


def union_closure(generators: Iterable[int]) -> set[int]:
    """All unions of nonempty subcollections of ``generators``.

    Worklist items are only ever unioned with a generator; every subfamily
    union is reachable by adding generators one at a time.
    """
    gens = list(dict.fromkeys(generators))
    seen = set(gens)
    work = list(gens)
    while work:
        s = work.pop()
        for g in gens:
            u = s | g
            if u not in seen:
                seen.add(u)
                work.append(u)
    return seen


def close(family: Family) -> ClosureFamily:
    if family.n == 0:
        raise DomainError("cannot close an empty family")
    return ClosureFamily(frozenset(union_closure(family.sets)), family)


def closure_size(family: Family) -> int:
    return len(close(family))


def closure_contains(family: Family, s: int) -> bool:
    """Decide S in <family> without building the closure."""
    covered = 0
    for g in family.sets:
        if g & ~s == 0:
            covered |= g
    return covered != 0 and covered == s


def blocker_sets(family: Family, x: int, restrict_to: int | None = None) -> list[int]:
    """Sets A inside G (or ``restrict_to``) with x in A, |A| >= k, and no
    x-containing generator inside A."""
    bit = 1 << x
    if x < 1 or not family.ground & bit:
        raise DomainError(f"element {x} is not in the ground set")
    base = family.ground if restrict_to is None else restrict_to & family.ground
    if not base & bit:
        return []
    through_x = [g for g in family.sets if g & bit]
    out = []
    for rest in submasks(base & ~bit):
        a = rest | bit
        if card(a) < family.k:
            continue
        if any(g & ~a == 0 for g in through_x):
            continue
        out.append(a)
    out.sort()
    return out


def blockers(family: Family, x: int, restrict_to: int | None = None) -> int:
    return len(blocker_sets(family, x, restrict_to))


def _distinguish(sets: list[int], s: int) -> int:
    ground = 0
    for b in sets:
        ground |= b
    if s == 1:
        return ground & -ground
    # element of least degree; ties to the smallest label
    x = min(labels_of(ground), key=lambda e: (sum(1 for b in sets if (b >> e) & 1), e))
    bit = 1 << x
    first = next(b for b in sets if b & bit)
    rest_ground = ground & ~first
    restricted = [b & rest_ground for b in sets if not b & bit]
    restricted = [b for b in restricted if b]
    return _distinguish(restricted, s - 1) | bit


def distinguishing_set(family: Family, s: int) -> int:
    """An s-set S on which the closure projects onto every nonempty subset of S.

    Needs |G| >= s*k; follows the induction that peels off an element of
    minimum degree together with one set through it.
    """
    if s < 1:
        raise PreconditionError("s must be at least 1")
    if card(family.ground) < s * family.k:
        raise PreconditionError(
            f"|G| = {card(family.ground)} is below s*k = {s * family.k}"
        )
    return _distinguish(list(family.sets), s)


def projections_realized(family: Family, s_mask: int) -> bool:
    """Whether every nonempty subset of ``s_mask`` is B & s_mask for some B in <family>."""
    traces = {g & s_mask for g in family.sets} - {0}
    return len(union_closure(traces)) == (1 << card(s_mask)) - 1


def extend_count(h: Iterable[int], a: int) -> int:
    """|H u {A u S : S in H}| for A not inside the union of H."""
    h = set(h)
    span = 0
    for m in h:
        span |= m
    if a & ~span == 0:
        raise PreconditionError("A must not be contained in the union of H")
    total = len(h | {a | m for m in h})
    # |A u S| collisions are confined to A & span, at most |A|-1 elements
    w = 1 << (card(a) - 1)
    assert total * w >= (w + 1) * len(h), "extension lower bound violated"
    return total
