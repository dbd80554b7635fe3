"""Named verification suites; each returns structured reports instead of raising."""

from __future__ import annotations

import platform
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Any, Callable

from . import __version__
from .closure import (blocker_sets, closure_contains, distinguishing_set, extend_count,
                      projections_realized, union_closure)
from .constructions import (all_ksets, counterexample_pair, minus_construction,
                            plus_construction, theorem2_values, up_set_size)
from .orders import OrderKind, initial_segment
from .search import SearchConfig, f_min, isomorphism_classes
from .setcore import (DomainError, Family, canonical_masks, card, labels_of, mask_of,
                      submasks)
from .shadows import (UniformFamily, cascade_upper_shadow, complement_transform,
                      delta_proportion, is_lex_segment, kk_min_upper_shadow, lex_segment,
                      lower_shadow, total_upper_shadow_count, upper_shadow)


@dataclass
class Report:
    claim_id: str
    parameters: dict
    expected: Any
    computed: Any
    passed: bool
    runtime: float = 0.0
    notes: str = ""
    reproducers: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "parameters": self.parameters,
            "expected": self.expected,
            "computed": self.computed,
            "pass": self.passed,
            "runtime": round(self.runtime, 4),
            "notes": self.notes,
            "reproducers": self.reproducers,
        }

    def line(self) -> str:
        params = " ".join(f"{k}={v}" for k, v in self.parameters.items())
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.claim_id} {params}: expected {self.expected}, computed {self.computed}"


def _timed(fn: Callable[..., Report]) -> Callable[..., Report]:
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        out = fn(*args, **kwargs)
        reports = out if isinstance(out, list) else [out]
        elapsed = time.perf_counter() - t0
        for r in reports:
            if not r.runtime:
                r.runtime = elapsed / len(reports)
        return out
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def run_header(seed: int | None) -> dict:
    return {
        "tool": "unionclosed",
        "version": __version__,
        "python": platform.python_version(),
        "seed": seed,
        "started": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }


def _lists(masks) -> list[list[int]]:
    return [labels_of(m) for m in masks]


# -- counterexample --------------------------------------------------------


@_timed
def check_counterexample() -> Report:
    a, b = counterexample_pair()
    sizes = [len(union_closure(a.sets)), len(union_closure(b.sets))]
    return Report("counterexample", {"k": 3, "n": 7}, [12, 13], sizes, sizes == [12, 13],
                  notes="max-lex family vs colex segment of length 7")


# -- graphs (k = 2) -------------------------------------------------------


def _is_star(edges: list[int]) -> bool:
    if len(edges) <= 1:
        return True
    common = edges[0]
    for e in edges[1:]:
        common &= e
    return common != 0


def _complement_edges(family: Family) -> list[int]:
    verts = labels_of(family.ground)
    present = set(family.sets)
    return [mask_of(e) for e in combinations(verts, 2) if mask_of(e) not in present]


@_timed
def check_theorem2(n_max: int = 8, workers: int = 1) -> list[Report]:
    reports = []
    for n in range(1, n_max + 1):
        t0 = time.perf_counter()
        t, r, f = theorem2_values(n)
        out = f_min(SearchConfig(n, 2, parallel_width=workers))
        colex_key = canonical_masks(initial_segment(OrderKind.COLEX, 2, n).sets)
        keys = [w.sets for w in out.witnesses]
        valid = all(len(union_closure(w.sets)) == out.minimum for w in out.witnesses)
        on_t = [w for w in out.witnesses if card(w.ground) == t]
        stars = all(_is_star(_complement_edges(w)) for w in on_t)
        colex_in = colex_key in keys
        unique = out.witness_count == 1
        ok = (out.complete and out.minimum == f and valid and colex_in and stars
              and (not unique or keys == [colex_key]))
        notes = []
        if not out.complete:
            notes.append("search incomplete")
        if not unique:
            notes.append(f"{out.witness_count} extremal classes; colex class "
                         f"{'present' if colex_in else 'MISSING'}")
        rep = Report(
            "theorem2", {"n": n, "k": 2, "t": t, "r": r}, f,
            {"f": out.minimum, "complete": out.complete, "witness_classes": out.witness_count,
             "unique": unique, "colex_among_witnesses": colex_in,
             "star_complement_on_t": stars, "nodes": out.nodes_explored},
            ok, time.perf_counter() - t0, "; ".join(notes))
        if not ok or not unique:
            rep.reproducers = [w.as_lists() for w in out.witnesses]
        reports.append(rep)
    return reports


# -- all k-sets of [t], and max-lex segments --------------------------------


@_timed
def check_conjecture7(k: int, t: int, workers: int = 1) -> Report:
    n = comb(t, k)
    expected = up_set_size(t, k)
    out = f_min(SearchConfig(n, k, parallel_width=workers))
    target = canonical_masks(all_ksets(t, k).sets)
    has_all = any(w.sets == target for w in out.witnesses)
    if not out.complete:
        status = "incomplete"
    elif out.minimum is not None and out.minimum < expected:
        status = "refuted-with-witness"
    elif out.minimum == expected and has_all:
        status = "confirmed"
    else:
        status = "mismatch"
    rep = Report("conj7", {"k": k, "t": t, "n": n}, expected,
                 {"f": out.minimum, "complete": out.complete,
                  "witness_classes": out.witness_count, "all_ksets_witness": has_all},
                 status == "confirmed", notes=status)
    if status != "confirmed":
        rep.reproducers = [w.as_lists() for w in out.witnesses]
    return rep


@_timed
def check_conjecture8(k: int, n_max: int, workers: int = 1) -> list[Report]:
    reports = []
    for n in range(1, n_max + 1):
        t0 = time.perf_counter()
        seg = initial_segment(OrderKind.MAXLEX, k, n)
        predicted = len(union_closure(seg.sets))
        out = f_min(SearchConfig(n, k, parallel_width=workers))
        ok = out.complete and out.minimum == predicted
        if not out.complete:
            status = "incomplete"
        elif out.minimum < predicted:
            status = "refuted-with-witness"
        else:
            status = "confirmed"
        rep = Report("conj8", {"k": k, "n": n}, predicted,
                     {"f": out.minimum, "complete": out.complete,
                      "witness_classes": out.witness_count},
                     ok, time.perf_counter() - t0, status)
        if not ok:
            rep.reproducers = [w.as_lists() for w in out.witnesses]
        reports.append(rep)
    return reports


# -- (k+1)-sets spanned by few k-sets --------------------------------------


def b_count(members: tuple, k: int) -> int:
    """Number of (k+1)-sets with at least k of their k-subsets in ``members``."""
    xs = set(members)
    ground = 0
    for m in xs:
        ground |= m
    fresh = 1 << (ground.bit_length() if ground else 1)
    tops = set()
    for m in xs:
        free = (ground | fresh) & ~m
        while free:
            low = free & -free
            tops.add(m | low)
            free ^= low
    count = 0
    for c in tops:
        inside = sum(1 for y in labels_of(c) if (c ^ (1 << y)) in xs)
        if inside >= k:
            count += 1
    return count


def _prop9_scan(k: int, cap: int) -> tuple[int, list]:
    classes = 0
    violations = []
    for l in range(1, comb(k + 1, 2)):
        for fam in isomorphism_classes(l, k, cap):
            classes += 1
            b = b_count(fam, k)
            if l < b * k - comb(b, 2):
                violations.append({"l": l, "b": b, "family": _lists(fam)})
    return classes, violations


@_timed
def check_prop9(k: int, ground_cap: int | None = None, revalidate: bool = True) -> Report:
    """l >= b*k - C(b,2) over all classes of l k-sets, l < C(k+1,2)."""
    if k > 4:
        raise DomainError("enumeration only supported for k <= 4")
    cap = 2 * k + 3 if ground_cap is None else ground_cap
    classes, violations = _prop9_scan(k, cap)
    computed: dict = {"classes": classes, "violations": len(violations)}
    notes = ""
    ok = not violations
    if revalidate and k <= 3:
        classes2, violations2 = _prop9_scan(k, cap + 1)
        computed["classes_at_cap_plus_1"] = classes2
        computed["violations_at_cap_plus_1"] = len(violations2)
        if bool(violations2) != bool(violations):
            ok = False
            notes = "verdict changed at cap+1"
        violations += violations2
    return Report("prop9", {"k": k, "ground_cap": cap}, {"violations": 0}, computed, ok,
                  notes=notes, reproducers=violations[:20])


# -- randomized lemma and shadow suites -------------------------------------


def _random_family(rng: random.Random, k: int, g: int, n: int) -> Family:
    pool = [mask_of(c) for c in combinations(range(1, g + 1), k)]
    return Family(rng.sample(pool, n), k)


def _lemma3_trial(rng: random.Random) -> dict | None:
    k = rng.randint(1, 4)
    g = rng.randint(k, 12)
    n = rng.randint(1, min(comb(g, k), 10))
    fam = _random_family(rng, k, g, n)
    size = len(union_closure(fam.sets))
    gsize = card(fam.ground)
    for s in range(1, gsize // k + 1):
        if size < (1 << s) - 1:
            return {"check": "ground-size", "s": s, "family": fam.as_lists()}
    s = gsize // k
    witness = distinguishing_set(fam, s)
    if card(witness) != s or witness & ~fam.ground or not projections_realized(fam, witness):
        return {"check": "distinguishing-set", "s": s, "distinguishing_set": labels_of(witness),
                "family": fam.as_lists()}
    return None


def _relabel_link(fam: Family, x: int) -> tuple[list[int], int]:
    """T = {A - x : x in A} moved onto [p] with p = |G| - 1."""
    others = [y for y in labels_of(fam.ground) if y != x]
    pos = {y: i for i, y in enumerate(others, 1)}
    bit = 1 << x
    link = [mask_of(pos[y] for y in labels_of(a ^ bit)) for a in fam.sets if a & bit]
    return link, len(others)


def _lemma4_trial(rng: random.Random) -> tuple[bool, dict | None]:
    """Returns (qualified, violation)."""
    k = rng.randint(2, 3)
    g = rng.randint(k + 1, 8 if k == 2 else 7)
    pool = [mask_of(c) for c in combinations(range(1, g + 1), k)]
    q = rng.uniform(0.4, 1.0)
    chosen = [m for m in pool if rng.random() < q] or [pool[0]]
    fam = Family(chosen, k)
    gsize = card(fam.ground)
    qualified = False
    for x in labels_of(fam.ground):
        d = sum(1 for a in fam.sets if (a >> x) & 1)
        per = comb(gsize, k - 2)
        s = d // per
        if s < 1:
            continue
        qualified = True
        ax = len(blocker_sets(fam, x))
        link, p = _relabel_link(fam, x)
        upper = total_upper_shadow_count(link, p)
        above = (1 << p) - sum(comb(p, i) for i in range(k - 1))
        lex_upper = total_upper_shadow_count(lex_segment(d, k - 1, p).members, p)
        if ax > 1 << (gsize - s) or ax != above - upper or upper < lex_upper:
            return True, {"check": "blocker-bound", "x": x, "s": s, "blockers": ax,
                          "bound": 1 << (gsize - s), "family": fam.as_lists()}
    return qualified, None


def _lemma5_trial(rng: random.Random) -> dict | None:
    g = rng.randint(1, 10)
    m = rng.randint(1, 16)
    h = {rng.randrange(1, 1 << g) << 1 for _ in range(m)}
    # g + 1 lies outside every member of H
    a = 1 << (g + 1)
    for y in range(1, g + 1):
        if rng.random() < 0.3:
            a |= 1 << y
    got = extend_count(h, a)
    brute = len(h | {a | s for s in h})
    bound = (1 + Fraction(1, 2 ** (card(a) - 1))) * len(h)
    bad = got != brute or got < bound or (card(a) == 1 and got != 2 * len(h))
    if bad:
        return {"check": "extension", "H": _lists(sorted(h)), "A": labels_of(a), "count": got}
    return None


def _blocker_trial(rng: random.Random) -> dict | None:
    k = rng.randint(1, 3)
    g = rng.randint(k, 8)
    n = rng.randint(1, min(comb(g, k), 8))
    fam = _random_family(rng, k, g, n)
    closure = union_closure(fam.sets)
    by_x = {x: set(blocker_sets(fam, x)) for x in labels_of(fam.ground)}
    for s in submasks(fam.ground):
        if card(s) < k:
            continue
        blocked = any(s in b for b in by_x.values())
        if (s not in closure) != blocked or closure_contains(fam, s) != (s in closure):
            return {"check": "blocker-decomposition", "S": labels_of(s), "family": fam.as_lists()}
    return None


@_timed
def check_lemma_properties(trials: int = 1000, seed: int = 0) -> Report:
    """Randomized ground-size, blocker-bound and extension checks, plus the
    blocker decomposition of the non-members of the closure."""
    rng = random.Random(seed)
    violations: list = []
    counts = {"lemma3": 0, "lemma4": 0, "lemma5": 0, "blockers": 0}
    for _ in range(trials):
        v = _lemma3_trial(rng)
        counts["lemma3"] += 1
        if v:
            violations.append(v)
    attempts = 0
    while counts["lemma4"] < trials and attempts < 20 * trials:
        attempts += 1
        qualified, v = _lemma4_trial(rng)
        if qualified:
            counts["lemma4"] += 1
        if v:
            violations.append(v)
    for _ in range(trials):
        counts["lemma5"] += 1
        v = _lemma5_trial(rng)
        if v:
            violations.append(v)
    for _ in range(trials):
        counts["blockers"] += 1
        v = _blocker_trial(rng)
        if v:
            violations.append(v)
    ok = not violations and all(c >= trials for c in counts.values())
    return Report("lemmas", {"trials": trials, "seed": seed}, {"violations": 0},
                  {"violations": len(violations), "trials_run": counts}, ok,
                  reproducers=violations[:20])


@_timed
def check_kruskal_katona(trials: int = 2000, seed: int = 0, p_max: int = 10) -> Report:
    """Upper shadows of random uniform families never beat the lex segment."""
    rng = random.Random(seed)
    violations: list = []
    equal_on_lex = 0
    for _ in range(trials):
        p = rng.randint(2, p_max)
        r = rng.randint(1, min(4, p - 1))
        pool = [mask_of(c) for c in combinations(range(1, p + 1), r)]
        m = rng.randint(0, len(pool))
        fam = UniformFamily(rng.sample(pool, m), r, p)
        least = kk_min_upper_shadow(m, r, p)
        got = len(upper_shadow(fam))
        seg = lex_segment(m, r, p)
        seg_shadow = upper_shadow(seg)
        if got < least:
            violations.append({"p": p, "r": r, "family": _lists(sorted(fam.members)),
                               "shadow": got, "kk_min": least})
        if len(seg_shadow) != cascade_upper_shadow(m, r, p):
            violations.append({"p": p, "r": r, "m": m, "lex_equality": False})
        else:
            equal_on_lex += 1
        if not is_lex_segment(seg_shadow):
            violations.append({"p": p, "r": r, "m": m, "lex_closure": False})
        if complement_transform(upper_shadow(fam)) != lower_shadow(complement_transform(fam)):
            violations.append({"p": p, "r": r, "family": _lists(sorted(fam.members)),
                               "duality": False})
    return Report("kk", {"trials": trials, "seed": seed, "p_max": p_max}, {"violations": 0},
                  {"violations": len(violations), "lex_equalities": equal_on_lex},
                  not violations, reproducers=violations[:20])


# -- constructions ---------------------------------------------------------


def _safe_threshold(rows: dict[int, bool]) -> int | None:
    """Least t from which every tested t onward matched."""
    safe = None
    for t in sorted(rows, reverse=True):
        if not rows[t]:
            break
        safe = t
    return safe


@_timed
def check_constructions(t_max: int = 8, k_max: int = 4) -> Report:
    mismatches = []
    thresholds: dict[str, int | None] = {}
    for k in range(1, k_max + 1):
        for l in range(0, comb(k + 1, 2)):
            rows = {}
            for t in range(k, t_max + 1):
                if l > comb(t - 1, k - 1) or comb(t, k) - l < 1:
                    continue
                c = minus_construction(t, k, l)
                got = len(union_closure(c.family.sets))
                rows[t] = got == c.predicted_size
                if not rows[t]:
                    mismatches.append({"kind": "minus", "t": t, "k": k, "l": l,
                                       "predicted": c.predicted_size, "closure": got})
            if rows:
                thresholds[f"minus k={k} l={l}"] = _safe_threshold(rows)
        if k < 2:
            continue
        for l in range(1, t_max - k + 3):
            rows = {}
            for t in range(k, t_max + 1):
                if l > t - k + 2:
                    continue
                c = plus_construction(t, k, l)
                got = len(union_closure(c.family.sets))
                rows[t] = got == c.predicted_size
                if not rows[t]:
                    mismatches.append({"kind": "plus", "t": t, "k": k, "l": l,
                                       "predicted": c.predicted_size, "closure": got})
            if rows:
                thresholds[f"plus k={k} l={l}"] = _safe_threshold(rows)
    # below its threshold a case may differ; at or above it, never
    above = [m for m in mismatches
             if thresholds.get(f"{m['kind']} k={m['k']} l={m['l']}") is None
             or m["t"] >= thresholds[f"{m['kind']} k={m['k']} l={m['l']}"]]
    delta_ok = all(delta_proportion(l + 1, k, (l + 2) * k) > delta_proportion(l, k, (l + 2) * k)
                   for k in range(2, 5) for l in range(0, 4))
    ok = not above and delta_ok and all(v is not None for v in thresholds.values())
    return Report("constructions", {"t_max": t_max, "k_max": k_max},
                  {"mismatches_above_threshold": 0},
                  {"cases": len(thresholds), "mismatches": len(mismatches),
                   "mismatches_above_threshold": len(above), "delta_increasing": delta_ok,
                   "safe_t": thresholds},
                  ok, reproducers=mismatches[:20])


CLAIMS = ("counterexample", "theorem2", "conj7", "conj8", "prop9", "lemmas", "kk",
          "constructions")


def run_claim(claim: str, **opts) -> list[Report]:
    """Dispatch used by the command line; ``opts`` holds claim-specific flags."""
    workers = opts.get("workers", 1)
    seed = opts.get("seed", 0)
    if claim == "counterexample":
        return [check_counterexample()]
    if claim == "theorem2":
        return check_theorem2(opts.get("n_max") or 8, workers)
    if claim == "conj7":
        pairs = [(opts["k"], opts["t"])] if opts.get("k") and opts.get("t") else \
            [(2, 4), (3, 4), (3, 3)]
        return [check_conjecture7(k, t, workers) for k, t in pairs]
    if claim == "conj8":
        return check_conjecture8(opts.get("k") or 3, opts.get("n_max") or 6, workers)
    if claim == "prop9":
        ks = [opts["k"]] if opts.get("k") else [2, 3]
        return [check_prop9(k) for k in ks]
    if claim == "lemmas":
        return [check_lemma_properties(opts.get("trials") or 1000, seed)]
    if claim == "kk":
        return [check_kruskal_katona(opts.get("trials") or 2000, seed)]
    if claim == "constructions":
        return [check_constructions(opts.get("t_max") or 8, opts.get("k_max") or 4)]
    if claim == "all":
        out: list[Report] = []
        for c in CLAIMS:
            out.extend(run_claim(c, **opts))
        return out
    raise DomainError(f"unknown claim {claim!r}; choose from {', '.join(CLAIMS)}, all")

