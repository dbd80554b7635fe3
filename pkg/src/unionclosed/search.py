"""Exact minimum of |<A>| over families A of n distinct k-sets.

Families are built as colex-ascending lists whose used labels always form an
initial segment [m].  Integer order on masks is colex order, and the
canonical form in :mod:`setcore` is the least ascending mask tuple, so a
canonical family with its largest member removed is again canonical: an
orderly generation in which every isomorphism class is met exactly once
when canonicity is checked at every depth.

Pruning:

* bound -- the closure only grows, and every further generator is a new
  k-set of the closure, so ``|closure| + remaining > incumbent`` is final;
* lemma3 -- a ground set of at least s*k elements forces at least 2^s - 1
  unions, which caps the ground set once the incumbent is known;
* canonicity -- non-canonical prefixes are dropped every ``canon_interval``
  levels and always at full depth.

Ties with the incumbent are kept so that every optimal class is reported.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import asdict, dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable

from .closure import union_closure
from .orders import OrderKind, initial_segment
from .setcore import (MAX_LABEL, DomainError, Family, canonical_masks,
                      is_canonical_masks, mask_of)

log = logging.getLogger(__name__)

CHECKPOINT_MAGIC = "unionclosed-checkpoint 1"


class CheckpointMismatch(DomainError):
    pass


class _BudgetExhausted(Exception):
    pass


@dataclass
class SearchConfig:
    n: int
    k: int
    ground_cap: int | None = None
    upper_bound_seed: str | int = "maxlex"
    parallel_width: int = 1
    checkpoint_path: str | None = None
    node_budget: int | None = None
    prune_bound: bool = True
    prune_lemma3: bool = True
    prune_canonicity: bool = True
    canon_interval: int = 1
    split_depth: int = 3
    max_witnesses: int = 64

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise DomainError("n and k must be positive")
        if self.ground_cap is not None and not 1 <= self.ground_cap <= MAX_LABEL:
            raise DomainError(f"ground cap must lie in 1..{MAX_LABEL}")
        if self.canon_interval < 1:
            raise DomainError("canon_interval must be at least 1")
        if isinstance(self.upper_bound_seed, str) and \
                self.upper_bound_seed not in ("maxlex", "colex"):
            raise DomainError(f"unknown seed {self.upper_bound_seed!r}")

    def identity(self, cap: int) -> dict:
        """Fields a checkpoint must agree on to be resumable."""
        return {
            "n": self.n, "k": self.k, "ground_cap": cap,
            "seed": str(self.upper_bound_seed),
            "prune_bound": int(self.prune_bound),
            "prune_lemma3": int(self.prune_lemma3),
            "prune_canonicity": int(self.prune_canonicity),
            "canon_interval": self.canon_interval,
            "split_depth": self.split_depth,
        }


@dataclass
class SearchOutcome:
    n: int
    k: int
    minimum: int | None
    witnesses: list[Family]
    witness_count: int
    witnesses_truncated: bool
    nodes_explored: int
    pruned_by_bound: int
    pruned_by_canonicity: int
    pruned_by_lemma3: int
    complete: bool
    seed_value: int
    ground_cap: int
    prefixes_total: int = 0
    prefixes_done: int = 0

    def to_json(self) -> dict:
        d = asdict(self)
        d["witnesses"] = [f.as_lists() for f in self.witnesses]
        return d


@dataclass
class _Counters:
    nodes: int = 0
    bound: int = 0
    canonicity: int = 0
    lemma3: int = 0

    def add(self, other: "_Counters") -> None:
        self.nodes += other.nodes
        self.bound += other.bound
        self.canonicity += other.canonicity
        self.lemma3 += other.lemma3


def lemma3_ground_limit(incumbent: int, k: int) -> int:
    """Largest ground size not forcing more than ``incumbent`` unions."""
    s = 1
    while (1 << s) - 1 <= incumbent:
        s += 1
    return s * k - 1


def seed_value(n: int, k: int, seed: str | int) -> int:
    if isinstance(seed, int):
        return seed
    order = OrderKind.MAXLEX if seed == "maxlex" else OrderKind.COLEX
    return len(union_closure(initial_segment(order, k, n).sets))


@dataclass
class _Task:
    """One subtree below a fixed prefix; plain data so it can cross processes."""
    n: int
    k: int
    cap: int
    prefix: tuple
    incumbent: int
    prune_bound: bool
    prune_lemma3: bool
    prune_canonicity: bool
    canon_interval: int
    budget: int | None = None


@dataclass
class _TaskResult:
    prefix: tuple
    best: int | None
    keys: set = field(default_factory=set)
    counters: _Counters = field(default_factory=_Counters)
    complete: bool = True


class _Walker:
    def __init__(self, n, k, cap, incumbent, prune_bound, prune_lemma3,
                 prune_canonicity, canon_interval, budget=None):
        self.n, self.k, self.cap = n, k, cap
        self.cands = sorted(mask_of(c) for c in combinations(range(1, cap + 1), k))
        self.index = {c: i for i, c in enumerate(self.cands)}
        self.incumbent = incumbent
        self.best: int | None = None
        self.keys: set = set()
        self.prune_bound = prune_bound
        self.prune_lemma3 = prune_lemma3
        self.prune_canonicity = prune_canonicity
        self.canon_interval = canon_interval
        self.budget = budget
        self.c = _Counters()
        self.stop_depth = n
        self.collect_full = False
        self.collected: list[tuple] = []

    def limit(self) -> int:
        if self.prune_lemma3:
            return min(self.cap, lemma3_ground_limit(self.incumbent, self.k))
        return self.cap

    def record(self, chosen: list[int], size: int) -> None:
        if size > self.incumbent:
            return
        key = tuple(chosen) if self.prune_canonicity else canonical_masks(chosen)
        if self.best is None or size < self.best:
            self.best = size
            self.keys = set()
        self.incumbent = size
        self.keys.add(key)

    def visit(self, chosen: list[int], closure: set, used: int, top: int) -> None:
        depth = len(chosen)
        if depth == self.stop_depth:
            if depth == self.n and not self.collect_full:
                self.record(chosen, len(closure))
            else:
                self.collected.append(tuple(chosen))
            return
        remaining = self.n - depth
        k = self.k
        limit = self.limit()
        start = self.index[chosen[-1]] + 1 if chosen else 0
        stop = len(self.cands) - remaining + 1
        cands = self.cands
        for idx in range(start, stop):
            g = cands[idx]
            gtop = g.bit_length() - 1
            if gtop > top + k:
                break
            new = g & ~used
            if new:
                block = new >> (top + 1)
                if block & (block + 1):
                    continue
            newtop = max(top, gtop)
            if newtop > limit:
                self.c.lemma3 += 1
                break
            grown = {g}
            grown.update(c | g for c in closure)
            grown |= closure
            if self.prune_bound and len(grown) + remaining - 1 > self.incumbent:
                self.c.bound += 1
                continue
            nxt = chosen + [g]
            d = depth + 1
            if self.prune_canonicity and (d % self.canon_interval == 0 or d == self.n):
                if not is_canonical_masks(nxt):
                    self.c.canonicity += 1
                    continue
            self.c.nodes += 1
            if self.budget is not None and self.c.nodes > self.budget:
                raise _BudgetExhausted
            self.visit(nxt, grown, used | g, newtop)

    def run_from(self, prefix: tuple) -> None:
        chosen = list(prefix)
        closure = union_closure(chosen) if chosen else set()
        used = 0
        for g in chosen:
            used |= g
        top = used.bit_length() - 1 if used else 0
        if self.prune_bound and chosen and len(closure) + self.n - len(chosen) > self.incumbent:
            self.c.bound += 1
            return
        if self.prune_lemma3 and top > self.limit():
            self.c.lemma3 += 1
            return
        self.visit(chosen, closure, used, top)


def _run_task(task: _Task) -> _TaskResult:
    w = _Walker(task.n, task.k, task.cap, task.incumbent, task.prune_bound,
                task.prune_lemma3, task.prune_canonicity, task.canon_interval,
                task.budget)
    res = _TaskResult(task.prefix, None)
    try:
        w.run_from(task.prefix)
    except _BudgetExhausted:
        res.complete = False
    res.best, res.keys, res.counters = w.best, w.keys, w.c
    return res


# -- checkpoints -----------------------------------------------------------


def _fmt_key(key: Iterable[int]) -> str:
    return ",".join(format(m, "x") for m in key) or "-"


def _parse_key(text: str) -> tuple:
    return () if text == "-" else tuple(int(h, 16) for h in text.split(","))


@dataclass
class _State:
    incumbent: int
    best: int | None
    keys: set
    done: set
    counters: _Counters


def write_checkpoint(path: str, identity: dict, state: _State) -> None:
    lines = [CHECKPOINT_MAGIC,
             "config " + " ".join(f"{k}={v}" for k, v in identity.items()),
             f"incumbent {state.incumbent}",
             f"best {'none' if state.best is None else state.best}",
             "counters nodes={0.nodes} bound={0.bound} canonicity={0.canonicity} "
             "lemma3={0.lemma3}".format(state.counters)]
    lines += [f"done {_fmt_key(p)}" for p in sorted(state.done)]
    lines += [f"witness {_fmt_key(w)}" for w in sorted(state.keys)]
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def read_checkpoint(path: str, identity: dict) -> _State | None:
    """Load a checkpoint; None when the file is absent or empty."""
    if not os.path.exists(path):
        return None
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        return None
    if lines[0] != CHECKPOINT_MAGIC:
        raise CheckpointMismatch(f"{path} is not a search checkpoint")
    saved: dict = {}
    state = _State(0, None, set(), set(), _Counters())
    for ln in lines[1:]:
        tag, _, rest = ln.partition(" ")
        if tag == "config":
            saved = dict(item.split("=", 1) for item in rest.split())
        elif tag == "incumbent":
            state.incumbent = int(rest)
        elif tag == "best":
            state.best = None if rest == "none" else int(rest)
        elif tag == "counters":
            vals = dict(item.split("=", 1) for item in rest.split())
            state.counters = _Counters(**{k: int(v) for k, v in vals.items()})
        elif tag == "done":
            state.done.add(_parse_key(rest))
        elif tag == "witness":
            state.keys.add(_parse_key(rest))
        else:
            raise CheckpointMismatch(f"unrecognized checkpoint line {ln!r}")
    want = {k: str(v) for k, v in identity.items()}
    diff = [f"{k}: checkpoint={saved.get(k)!r} requested={want[k]!r}"
            for k in want if saved.get(k) != want[k]]
    if diff:
        raise CheckpointMismatch("checkpoint was written for a different search: "
                                 + "; ".join(diff))
    return state


# -- driver ----------------------------------------------------------------


def _effective_cap(config: SearchConfig, seed: int) -> int:
    cap = min(config.n * config.k, MAX_LABEL)
    if config.ground_cap is not None:
        cap = min(cap, config.ground_cap)
    if config.prune_lemma3:
        cap = min(cap, lemma3_ground_limit(seed, config.k))
    return cap


def _merge(state: _State, res: _TaskResult) -> None:
    state.counters.add(res.counters)
    if res.best is None:
        return
    if state.best is None or res.best < state.best:
        state.best = res.best
        state.keys = set(res.keys)
    elif res.best == state.best:
        state.keys |= res.keys
    state.incumbent = min(state.incumbent, res.best)


def f_min(config: SearchConfig) -> SearchOutcome:
    """Exhaustive minimum of the generated union-closed family size."""
    n, k = config.n, config.k
    seed = seed_value(n, k, config.upper_bound_seed)
    cap = _effective_cap(config, seed)
    if comb(cap, k) < n:
        raise DomainError(f"infeasible: C({cap},{k}) = {comb(cap, k)} < n = {n}")
    identity = config.identity(cap)

    state = None
    if config.checkpoint_path:
        state = read_checkpoint(config.checkpoint_path, identity)
    if state is None:
        state = _State(seed, None, set(), set(), _Counters())

    # top-level prefixes, enumerated against the seed so the split is fixed
    depth = max(0, min(config.split_depth, n - 1))
    splitter = _Walker(n, k, cap, seed, config.prune_bound, config.prune_lemma3,
                       config.prune_canonicity, config.canon_interval)
    splitter.stop_depth = depth
    splitter.run_from(())
    prefixes = sorted(splitter.collected)
    todo = [p for p in prefixes if p not in state.done]
    log.info("f_min n=%d k=%d cap=%d seed=%d: %d prefixes, %d to do",
             n, k, cap, seed, len(prefixes), len(todo))

    complete = True
    budget = config.node_budget
    abandoned = _Counters()  # work in unfinished subtrees; reported, never saved
    resumed_nodes = state.counters.nodes  # the budget applies to this run only

    def remaining_budget():
        if budget is None:
            return None
        spent = state.counters.nodes - resumed_nodes + splitter.c.nodes + abandoned.nodes
        return budget - spent

    def make_task(prefix):
        return _Task(n, k, cap, prefix, state.incumbent, config.prune_bound,
                     config.prune_lemma3, config.prune_canonicity,
                     config.canon_interval, remaining_budget())

    def finish(res: _TaskResult) -> bool:
        if not res.complete:
            abandoned.add(res.counters)
            return False
        _merge(state, res)
        state.done.add(res.prefix)
        if config.checkpoint_path:
            write_checkpoint(config.checkpoint_path, identity, state)
        return True

    if config.parallel_width <= 1:
        for prefix in todo:
            rb = remaining_budget()
            if rb is not None and rb <= 0:
                complete = False
                break
            if not finish(_run_task(make_task(prefix))):
                complete = False
                break
    else:
        queue = list(todo)
        with ProcessPoolExecutor(max_workers=config.parallel_width) as pool:
            running = set()
            while queue or running:
                while queue and len(running) < config.parallel_width and complete:
                    rb = remaining_budget()
                    if rb is not None and rb <= 0:
                        complete = False
                        break
                    running.add(pool.submit(_run_task, make_task(queue.pop(0))))
                if not running:
                    break
                finished, running = wait(running, return_when=FIRST_COMPLETED)
                for fut in finished:
                    if not finish(fut.result()):
                        complete = False
                if not complete:
                    queue.clear()
        if len(state.done & set(prefixes)) < len(prefixes):
            complete = False
    if not complete and len(todo) == len([p for p in prefixes if p not in state.done]):
        log.warning("node budget too small to finish any subtree; no progress was saved")

    keys = sorted(state.keys)
    shown = keys[:config.max_witnesses]
    c = _Counters()
    c.add(splitter.c)
    c.add(state.counters)
    c.add(abandoned)
    return SearchOutcome(
        n=n, k=k,
        minimum=state.best,
        witnesses=[Family(w, k) for w in shown],
        witness_count=len(keys),
        witnesses_truncated=len(keys) > len(shown),
        nodes_explored=c.nodes,
        pruned_by_bound=c.bound,
        pruned_by_canonicity=c.canonicity,
        pruned_by_lemma3=c.lemma3,
        complete=complete,
        seed_value=seed,
        ground_cap=cap,
        prefixes_total=len(prefixes),
        prefixes_done=len(state.done & set(prefixes)),
    )


def isomorphism_classes(n: int, k: int, ground_cap: int) -> list[tuple]:
    """Canonical mask tuples of every family of n k-sets on at most ground_cap points."""
    if comb(ground_cap, k) < n:
        return []
    w = _Walker(n, k, ground_cap, 0, False, False, True, 1)
    w.collect_full = True
    w.run_from(())
    return sorted(w.collected)


def f_value(n: int, k: int, **kwargs) -> int:
    """Convenience: the certified minimum, raising if the search was cut short."""
    out = f_min(SearchConfig(n, k, **kwargs))
    if not out.complete or out.minimum is None:
        raise RuntimeError(f"search for f({n},{k}) did not complete")
    return out.minimum
