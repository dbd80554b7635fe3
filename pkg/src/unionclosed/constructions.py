"""Explicit candidate-extremal families and the closure sizes predicted for them."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from math import comb, isqrt
from typing import NamedTuple

from .orders import OrderKind, initial_segment
from .setcore import MAX_LABEL, DomainError, Family, full, mask_of
from .shadows import total_upper_shadow_count


class Kind(enum.Enum):
    ALL_KSETS = "allk"
    COLEX_SEGMENT = "colex"
    MAXLEX_SEGMENT = "maxlex"
    MINUS_COLEX_STAR = "minus"
    PLUS_PENCIL = "plus"


@dataclass(frozen=True)
class Construction:
    kind: Kind
    params: dict = field(hash=False)
    family: Family
    predicted_size: int | None

    def record(self) -> dict:
        return {"kind": self.kind.value, "params": dict(self.params),
                "predicted_size": self.predicted_size}


def all_ksets(t: int, k: int) -> Family:
    if not 1 <= k <= t <= MAX_LABEL:
        raise DomainError(f"need 1 <= k <= t <= {MAX_LABEL}, got t={t}, k={k}")
    return Family((mask_of(c) for c in combinations(range(1, t + 1), k)), k)


def up_set_size(t: int, k: int) -> int:
    """|[t]^(>=k)| = 2^t - sum_{i<k} C(t, i)."""
    if k > t:
        raise DomainError("k must not exceed t")
    return (1 << t) - sum(comb(t, i) for i in range(k))


class GraphValues(NamedTuple):
    t: int
    r: int
    f: int


def _t_minimal(n: int) -> int:
    t = 2
    while comb(t, 2) < n:
        t += 1
    return t


def floor_formula_t(n: int) -> int:
    # floor(sqrt(2n) + 3/2) in integers: largest t with 2t - 3 <= sqrt(8n)
    t = (isqrt(8 * n) + 3) // 2
    while (2 * t - 3) ** 2 > 8 * n:
        t -= 1
    while (2 * t - 1) ** 2 <= 8 * n:
        t += 1
    return t


def theorem2_values(n: int) -> GraphValues:
    """t, r = C(t,2) - n and f(n,2) = 2^t - 2^r - t for n graph edges."""
    if n < 1:
        raise DomainError("n must be positive")
    t = _t_minimal(n)
    r = comb(t, 2) - n
    return GraphValues(t, r, (1 << t) - (1 << r) - t)


def s_l(l: int, k: int) -> int:
    """Largest s with l >= s*k - C(s, 2)."""
    if not 0 <= l < comb(k + 1, 2):
        raise DomainError(f"l must lie in 0..C({k + 1},2)-1")
    s = 0
    while s + 1 <= k and l >= (s + 1) * k - comb(s + 1, 2):
        s += 1
    return s


def colex_segment(k: int, n: int) -> Construction:
    fam = initial_segment(OrderKind.COLEX, k, n)
    return Construction(Kind.COLEX_SEGMENT, {"k": k, "n": n}, fam, None)


def maxlex_segment(k: int, n: int) -> Construction:
    fam = initial_segment(OrderKind.MAXLEX, k, n)
    return Construction(Kind.MAXLEX_SEGMENT, {"k": k, "n": n}, fam, None)


def all_ksets_construction(t: int, k: int) -> Construction:
    return Construction(Kind.ALL_KSETS, {"t": t, "k": k}, all_ksets(t, k), up_set_size(t, k))


def minus_construction(t: int, k: int, l: int) -> Construction:
    """[t]^(k) without {A + t : A in the first l colex (k-1)-subsets of [t-1]}."""
    if k < 1 or t < k or t > MAX_LABEL:
        raise DomainError(f"need 1 <= k <= t <= {MAX_LABEL}")
    if not 0 <= l < comb(k + 1, 2):
        raise DomainError(f"l must lie in 0..C({k + 1},2)-1")
    if l > comb(t - 1, k - 1):
        raise DomainError(f"l exceeds C({t - 1},{k - 1})")
    if l >= comb(t, k):
        raise DomainError("removing l sets would leave an empty family")
    removed = set()
    if l:
        top = 1 << t
        removed = {a | top for a in initial_segment(OrderKind.COLEX, k - 1, l, t - 1).sets}
    fam = Family((a for a in all_ksets(t, k).sets if a not in removed), k)
    predicted = up_set_size(t, k) - l - s_l(l, k)
    return Construction(Kind.MINUS_COLEX_STAR, {"t": t, "k": k, "l": l}, fam, predicted)


def pencil_traces(t: int, k: int, l: int) -> list[int]:
    """Y_i & [t] = {1, ..., k-2, k-2+i} for i = 1..l."""
    core = full(k - 2)
    return [core | (1 << (k - 2 + i)) for i in range(1, l + 1)]


def plus_construction(t: int, k: int, l: int) -> Construction:
    """[t]^(k) plus Y_i = {1, ..., k-2, k-2+i, t+1} for i = 1..l."""
    if k < 2 or t < k:
        raise DomainError("need 2 <= k <= t")
    if t + 1 > MAX_LABEL:
        raise DomainError(f"ground t+1 exceeds {MAX_LABEL}")
    if not 1 <= l <= t - k + 2:
        raise DomainError(f"l must lie in 1..{t - k + 2}")
    traces = pencil_traces(t, k, l)
    extra = [y | (1 << (t + 1)) for y in traces]
    fam = Family(list(all_ksets(t, k).sets) + extra, k)
    predicted = up_set_size(t, k) + total_upper_shadow_count(traces, t)
    return Construction(Kind.PLUS_PENCIL, {"t": t, "k": k, "l": l}, fam, predicted)


def counterexample_pair() -> tuple[Family, Family]:
    """[4]^(3) + {125, 135, 145} and the colex segment of length 7 on 3-sets."""
    a = Family.from_lists([[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4],
                           [1, 2, 5], [1, 3, 5], [1, 4, 5]])
    b = initial_segment(OrderKind.COLEX, 3, 7)
    return a, b


def build(kind: Kind | str, t: int | None = None, k: int | None = None,
          n: int | None = None, l: int | None = None) -> Construction:
    """Dispatch by kind name, as used by the command line."""
    kind = Kind(kind) if not isinstance(kind, Kind) else kind

    def need(name, value):
        if value is None:
            raise DomainError(f"{kind.value} needs --{name}")
        return value

    if kind is Kind.ALL_KSETS:
        return all_ksets_construction(need("t", t), need("k", k))
    if kind is Kind.COLEX_SEGMENT:
        return colex_segment(need("k", k), need("n", n))
    if kind is Kind.MAXLEX_SEGMENT:
        return maxlex_segment(need("k", k), need("n", n))
    if kind is Kind.MINUS_COLEX_STAR:
        return minus_construction(need("t", t), need("k", k), need("l", l))
    return plus_construction(need("t", t), need("k", k), need("l", l))
