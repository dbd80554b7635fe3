"""Bitmask sets, uniform families, and canonical forms under relabeling.

An element set is a plain ``int``: label ``i`` (1..64) lives in bit ``i``,
bit 0 is never used.  Integer order on masks coincides with colex order on
the sets they encode, which the rest of the package relies on.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

MAX_LABEL = 64
DEFAULT_PERMUTATION_CAP = 12

_LABEL_BITS = ((1 << (MAX_LABEL + 1)) - 1) & ~1


class DomainError(ValueError):
    """Arguments outside the domain of an operation."""


class CapacityError(DomainError):
    """Ground set too large for brute-force canonicalization."""


class FamilyParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def mask_of(labels: Iterable[int]) -> int:
    m = 0
    for x in labels:
        x = int(x)
        if not 1 <= x <= MAX_LABEL:
            raise DomainError(f"label {x} outside 1..{MAX_LABEL}")
        m |= 1 << x
    return m


def labels_of(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def card(mask: int) -> int:
    return mask.bit_count()


def interval(a: int, b: int) -> int:
    """Mask of {a, ..., b}; empty when b < a."""
    if b < a:
        return 0
    return ((1 << (b + 1)) - 1) & ~((1 << a) - 1)


def full(t: int) -> int:
    """Mask of [t] = {1, ..., t}."""
    return interval(1, t)


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def format_set(mask: int) -> str:
    return "{" + ",".join(map(str, labels_of(mask))) + "}"


@dataclass(frozen=True)
class Family:
    """Ordered list of distinct k-sets together with their ground set."""

    k: int
    sets: tuple[int, ...]
    ground: int

    def __init__(self, sets: Iterable[int], k: int | None = None):
        sets = tuple(int(s) for s in sets)
        if k is None:
            if not sets:
                raise DomainError("cannot infer k for an empty family")
            k = card(sets[0])
        if k < 1:
            raise DomainError("k must be at least 1")
        ground = 0
        for s in sets:
            if s & ~_LABEL_BITS:
                raise DomainError(f"set {s:#x} uses labels outside 1..{MAX_LABEL}")
            if card(s) != k:
                raise DomainError(f"{format_set(s)} does not have {k} elements")
            ground |= s
        if len(set(sets)) != len(sets):
            raise DomainError("family members must be distinct")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "sets", sets)
        object.__setattr__(self, "ground", ground)

    @classmethod
    def from_lists(cls, lists: Iterable[Iterable[int]], k: int | None = None) -> "Family":
        return cls([mask_of(x) for x in lists], k)

    @property
    def n(self) -> int:
        return len(self.sets)

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self) -> Iterator[int]:
        return iter(self.sets)

    def as_lists(self) -> list[list[int]]:
        return [labels_of(s) for s in self.sets]

    def sorted(self) -> "Family":
        return Family(sorted(self.sets), self.k)

    def same_members(self, other: "Family") -> bool:
        return self.k == other.k and set(self.sets) == set(other.sets)

    def __str__(self) -> str:
        return "{" + ", ".join(format_set(s) for s in self.sets) + "}"


def degree(family: Family, x: int) -> int:
    if not (family.ground >> x) & 1 or x < 1:
        raise DomainError(f"element {x} is not in the ground set")
    bit = 1 << x
    return sum(1 for s in family.sets if s & bit)


def degree_multiset(family: Family) -> tuple[int, ...]:
    return tuple(sorted(degree(family, x) for x in labels_of(family.ground)))


def relabel(family: Family, mapping: dict[int, int]) -> Family:
    """Apply an injective label map to every member."""
    if len(set(mapping.values())) != len(mapping):
        raise DomainError("relabeling must be injective")
    out = []
    for s in family.sets:
        out.append(mask_of(mapping[x] for x in labels_of(s)))
    return Family(out, family.k)


# -- canonical forms -------------------------------------------------------
#
# The canonical form of a family is the lexicographically least ascending
# tuple of masks over all relabelings of its ground set onto [m].  Labels are
# handed out 1, 2, ... in turn; once label j is placed, every member lying
# inside [j] has a known mask and those masks are already a prefix of the
# final sorted tuple.  Partial labelings whose prefix loses are dropped.


def _new_block(members: Sequence[int], assigned_mask: int, elem: int, label: int,
               images: dict[int, int]) -> list[int]:
    """Masks of members completed by assigning ``label`` to ``elem``."""
    covered = assigned_mask | (1 << elem)
    bit = 1 << elem
    block = []
    for s in members:
        if s & bit and s & ~covered == 0:
            m = 1 << label
            for y in labels_of(s ^ bit):
                m |= 1 << images[y]
            block.append(m)
    block.sort()
    return block


def _cmp_block(a: list[int], b: list[int]) -> int:
    """Compare two blocks completed at the same label; more members wins."""
    for x, y in zip(a, b):
        if x != y:
            return -1 if x < y else 1
    if len(a) == len(b):
        return 0
    return -1 if len(a) > len(b) else 1


def canonical_masks(members: Sequence[int]) -> tuple[int, ...]:
    """Canonical ascending mask tuple of a set system, with no size cap."""
    if not members:
        return ()
    ground = 0
    for s in members:
        ground |= s
    elems = labels_of(ground)
    m = len(elems)
    # each state: (images dict, assigned source mask)
    states: list[tuple[dict[int, int], int]] = [({}, 0)]
    result: list[int] = []
    for label in range(1, m + 1):
        best: list[int] | None = None
        survivors: list[tuple[dict[int, int], int]] = []
        for images, assigned in states:
            for e in elems:
                if (assigned >> e) & 1:
                    continue
                block = _new_block(members, assigned, e, label, images)
                c = -1 if best is None else _cmp_block(block, best)
                if c > 0:
                    continue
                nxt = dict(images)
                nxt[e] = label
                if c < 0:
                    best = block
                    survivors = []
                survivors.append((nxt, assigned | (1 << e)))
        states = survivors
        result.extend(best or ())
    return tuple(result)


def is_canonical_masks(members: Sequence[int]) -> bool:
    """True when the ascending tuple of ``members`` is its own canonical form.

    Depth-first with early exit; used by the search on every node, so it
    never materializes the full canonical form.
    """
    members = sorted(members)
    ground = 0
    for s in members:
        ground |= s
    m = ground.bit_length() - 1
    if ground != full(m):
        return False
    elems = list(range(1, m + 1))
    # identity blocks: members whose top label is j
    target: dict[int, list[int]] = {j: [] for j in elems}
    for s in members:
        target[s.bit_length() - 1].append(s)

    def dfs(label: int, images: dict[int, int], assigned: int) -> bool:
        if label > m:
            return True
        for e in elems:
            if (assigned >> e) & 1:
                continue
            block = _new_block(members, assigned, e, label, images)
            c = _cmp_block(block, target[label])
            if c < 0:
                return False
            if c == 0:
                images[e] = label
                ok = dfs(label + 1, images, assigned | (1 << e))
                del images[e]
                if not ok:
                    return False
        return True

    return dfs(1, {}, 0)


def _check_cap(family: Family, cap: int) -> None:
    size = card(family.ground)
    if size > cap:
        raise CapacityError(
            f"ground set has {size} elements, over the permutation cap {cap}; "
            "use unionclosed.search for incremental canonicity"
        )


def canonicalize(family: Family, cap: int = DEFAULT_PERMUTATION_CAP) -> Family:
    """Canonical representative of ``family``'s isomorphism class.

    Raises CapacityError when the ground set exceeds ``cap``; the search
    module canonicalizes incrementally and is not subject to the cap.
    """
    _check_cap(family, cap)
    return Family(canonical_masks(family.sets), family.k)


def is_isomorphic(f1: Family, f2: Family, cap: int = DEFAULT_PERMUTATION_CAP) -> bool:
    _check_cap(f1, cap)
    _check_cap(f2, cap)
    if f1.k != f2.k or f1.n != f2.n or card(f1.ground) != card(f2.ground):
        return False
    if degree_multiset(f1) != degree_multiset(f2):
        return False
    return canonical_masks(f1.sets) == canonical_masks(f2.sets)


# -- text format -----------------------------------------------------------


def parse_family(text: str) -> Family:
    """Parse one set per line, space-separated labels, '#' comments."""
    sets: list[int] = []
    seen: dict[int, int] = {}
    k = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            labels = [int(tok) for tok in line.split()]
        except ValueError:
            raise FamilyParseError(f"non-integer label in {line!r}", lineno) from None
        if len(set(labels)) != len(labels):
            raise FamilyParseError("repeated label within a set", lineno)
        try:
            m = mask_of(labels)
        except DomainError as exc:
            raise FamilyParseError(str(exc), lineno) from None
        if m in seen:
            raise FamilyParseError(f"duplicate of the set on line {seen[m]}", lineno)
        if k is None:
            k = len(labels)
        elif len(labels) != k:
            raise FamilyParseError(f"set has {len(labels)} elements, expected {k}", lineno)
        seen[m] = lineno
        sets.append(m)
    if not sets:
        raise FamilyParseError("no sets found")
    return Family(sets, k)


def format_family(family: Family | Iterable[int]) -> str:
    sets = family.sets if isinstance(family, Family) else family
    return "".join(" ".join(map(str, labels_of(s))) + "\n" for s in sets)


def read_family(path: str) -> Family:
    with open(path) as fh:
        return parse_family(fh.read())


def write_family(path: str, family: Family, header: str | None = None) -> None:
    with open(path, "w") as fh:
        if header:
            fh.write(f"# {header}\n")
        fh.write(format_family(family))


def degree_counter(members: Iterable[int]) -> Counter:
    c: Counter = Counter()
    for s in members:
        for x in labels_of(s):
            c[x] += 1
    return c
