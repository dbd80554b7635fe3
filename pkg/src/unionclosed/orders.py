"""Colex, lex and max-lex orders on k-sets: comparison, rank, initial segments."""

from __future__ import annotations

import enum
from itertools import combinations, count, islice
from math import comb
from typing import Iterator

from .setcore import DomainError, Family, card, full, labels_of, mask_of


class OrderKind(enum.Enum):
    COLEX = "colex"
    LEX = "lex"
    MAXLEX = "maxlex"

    @classmethod
    def parse(cls, value: "OrderKind | str") -> "OrderKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower().replace("-", "").replace("_", ""))
        except ValueError:
            raise DomainError(f"unknown order {value!r}") from None


def _lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def compare(order: OrderKind | str, a: int, b: int, universe: int | None = None) -> int:
    """Return -1, 0 or 1 as ``a`` is before, equal to, or after ``b``."""
    order = OrderKind.parse(order)
    if card(a) != card(b):
        raise DomainError("compared sets must have equal size")
    if order is OrderKind.LEX and universe is not None and (a | b) & ~full(universe):
        raise DomainError(f"lex comparison requires both sets inside [{universe}]")
    if a == b:
        return 0
    if order is OrderKind.COLEX:
        # the top differing bit is max of the symmetric difference
        return -1 if a < b else 1
    if order is OrderKind.LEX:
        low = _lowest(a ^ b)
        return -1 if (a >> low) & 1 else 1
    top_a, top_b = a.bit_length(), b.bit_length()
    if top_a != top_b:
        return -1 if top_a < top_b else 1
    low = _lowest(a ^ b)
    return -1 if (a >> low) & 1 else 1


def _colex_iter(k: int) -> Iterator[int]:
    # Gosper's hack: next larger integer with the same popcount
    x = (1 << k) - 1  # shifted down one bit, since label 0 is unused
    while True:
        yield x << 1
        c = x & -x
        r = x + c
        x = (((r ^ x) >> 2) // c) | r


def _lex_iter(k: int, p: int) -> Iterator[int]:
    for combo in combinations(range(1, p + 1), k):
        yield mask_of(combo)


def _maxlex_iter(k: int) -> Iterator[int]:
    for top in count(k):
        bit = 1 << top
        for combo in combinations(range(1, top), k - 1):
            yield mask_of(combo) | bit


def iterate(order: OrderKind | str, k: int, universe: int | None = None) -> Iterator[int]:
    """All k-sets in ascending order; finite only when a universe is given."""
    order = OrderKind.parse(order)
    if k < 1:
        raise DomainError("k must be at least 1")
    if order is OrderKind.LEX:
        if universe is None:
            raise DomainError("lex order needs a finite universe")
        return _lex_iter(k, universe)
    it = _colex_iter(k) if order is OrderKind.COLEX else _maxlex_iter(k)
    if universe is not None:
        it = islice(it, comb(universe, k))
    return it


def initial_segment(order: OrderKind | str, k: int, n: int, universe: int | None = None) -> Family:
    """The first ``n`` k-sets of ``order`` as a Family, ascending."""
    order = OrderKind.parse(order)
    if n < 0:
        raise DomainError("segment length must be non-negative")
    if universe is not None and n > comb(universe, k):
        raise DomainError(f"{n} exceeds C({universe},{k}) = {comb(universe, k)}")
    return Family(islice(iterate(order, k, universe), n), k)


def segment_masks(order: OrderKind | str, k: int, n: int, universe: int | None = None) -> list[int]:
    return list(initial_segment(order, k, n, universe).sets)


def _lex_rank(elems: list[int], p: int) -> int:
    # number of k-subsets of [p] lexicographically before elems
    k = len(elems)
    r = 0
    prev = 0
    for i, a in enumerate(elems):
        for v in range(prev + 1, a):
            r += comb(p - v, k - i - 1)
        prev = a
    return r


def rank(order: OrderKind | str, a: int, universe: int | None = None) -> int:
    """0-based position of ``a`` in ``order``."""
    order = OrderKind.parse(order)
    elems = labels_of(a)
    k = len(elems)
    if k == 0:
        raise DomainError("cannot rank the empty set")
    if order is OrderKind.COLEX:
        return sum(comb(x - 1, i) for i, x in enumerate(elems, 1))
    if order is OrderKind.LEX:
        if universe is None:
            raise DomainError("lex order needs a finite universe")
        if elems[-1] > universe:
            raise DomainError(f"set is not inside [{universe}]")
        return _lex_rank(elems, universe)
    top = elems[-1]
    return comb(top - 1, k) + _lex_rank(elems[:-1], top - 1)
