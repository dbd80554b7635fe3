from itertools import combinations
from math import comb

import pytest

from oracles import brute_canonical, brute_fmin
from unionclosed.closure import closure_size
from unionclosed.constructions import theorem2_values
from unionclosed.search import (CheckpointMismatch, SearchConfig, f_min, f_value,
                                isomorphism_classes, lemma3_ground_limit)
from unionclosed.setcore import DomainError, Family, canonical_masks, labels_of


def classes(families):
    return {brute_canonical([set(s) for s in fam]) for fam in families}


def outcome_classes(out):
    return {canonical_masks(w.sets) for w in out.witnesses}


@pytest.mark.parametrize("n,k", [(1, 2), (2, 2), (3, 2), (4, 2), (1, 3), (2, 3), (3, 3)])
def test_matches_brute_force_over_full_ground(n, k):
    best, arg = brute_fmin(n, k, n * k)
    out = f_min(SearchConfig(n, k))
    assert out.complete
    assert out.minimum == best
    assert outcome_classes(out) == classes(arg)
    assert out.witness_count == len(classes(arg))


def test_spec_examples():
    assert f_value(1, 4) == 1
    out = f_min(SearchConfig(3, 2))
    assert out.minimum == 4
    assert [w.as_lists() for w in out.witnesses] == [[[1, 2], [1, 3], [2, 3]]]
    out = f_min(SearchConfig(4, 3))
    assert out.minimum == 5
    assert [w.as_lists() for w in out.witnesses] == [[[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]]]


@pytest.mark.parametrize("n,k,g", [(3, 2, 5), (4, 2, 5), (5, 2, 5), (3, 3, 5), (5, 3, 5), (4, 3, 6)])
def test_isomorphism_classes_match_permutation_oracle(n, k, g):
    ksets = [frozenset(c) for c in combinations(range(1, g + 1), k)]
    expected = classes(combinations(ksets, n))
    got = set(isomorphism_classes(n, k, g))
    assert got == expected
    assert len(isomorphism_classes(n, k, g)) == len(got)


@pytest.mark.parametrize("flags", [
    dict(prune_bound=False),
    dict(prune_lemma3=False),
    dict(prune_canonicity=False),
    dict(canon_interval=2),
    dict(canon_interval=3),
    dict(prune_bound=False, prune_lemma3=False, prune_canonicity=False),
])
@pytest.mark.parametrize("n,k", [(4, 2), (5, 2), (3, 3), (4, 3)])
def test_each_pruning_rule_is_sound(flags, n, k):
    ref = f_min(SearchConfig(n, k))
    out = f_min(SearchConfig(n, k, **flags))
    assert out.complete and out.minimum == ref.minimum
    assert outcome_classes(out) == outcome_classes(ref)


def test_pruning_counters_move():
    on = f_min(SearchConfig(6, 2))
    off = f_min(SearchConfig(6, 2, prune_bound=False, prune_lemma3=False, prune_canonicity=False))
    assert on.nodes_explored < off.nodes_explored
    assert off.pruned_by_bound == off.pruned_by_canonicity == off.pruned_by_lemma3 == 0
    assert on.pruned_by_bound > 0 and on.pruned_by_canonicity > 0


def test_lemma3_limit():
    # 2^s - 1 > incumbent first at s = 3 for incumbent 4..6
    assert lemma3_ground_limit(4, 2) == 5
    assert lemma3_ground_limit(7, 3) == 11
    assert lemma3_ground_limit(1, 2) == 3


def test_seeds_and_ground_cap():
    n, k = 5, 2
    expect = theorem2_values(n).f
    for seed in ("maxlex", "colex", expect, expect + 3):
        assert f_min(SearchConfig(n, k, upper_bound_seed=seed)).minimum == expect
    # a seed below the true minimum finds nothing, and says so
    out = f_min(SearchConfig(n, k, upper_bound_seed=expect - 1))
    assert out.complete and out.minimum is None and out.witness_count == 0
    with pytest.raises(DomainError):
        f_min(SearchConfig(7, 2, ground_cap=4))
    # a cap that excludes the optimum gives the constrained minimum instead
    capped = f_min(SearchConfig(3, 2, ground_cap=4, upper_bound_seed=100))
    assert capped.minimum == 4


def test_witnesses_really_attain_minimum():
    for n in range(1, 9):
        out = f_min(SearchConfig(n, 2))
        for w in out.witnesses:
            assert w.n == n and closure_size(w) == out.minimum


OFF = dict(prune_bound=False, prune_lemma3=False, prune_canonicity=False, ground_cap=6)


def test_checkpoint_resume_is_deterministic(tmp_path):
    path = str(tmp_path / "ck.txt")
    ref = f_min(SearchConfig(6, 3, **OFF))
    rounds = 0
    while True:
        out = f_min(SearchConfig(6, 3, **OFF, checkpoint_path=path, node_budget=1000))
        rounds += 1
        if out.complete:
            break
        assert rounds < 1000
    assert rounds > 1
    assert out.minimum == ref.minimum
    assert outcome_classes(out) == outcome_classes(ref)
    with pytest.raises(CheckpointMismatch):
        f_min(SearchConfig(5, 3, **OFF, checkpoint_path=path))
    with pytest.raises(CheckpointMismatch):
        f_min(SearchConfig(6, 3, checkpoint_path=path))


def test_checkpoint_counters_match_uninterrupted(tmp_path):
    path = str(tmp_path / "ck.txt")
    ref = f_min(SearchConfig(6, 3, **OFF))
    out = None
    while out is None or not out.complete:
        out = f_min(SearchConfig(6, 3, **OFF, checkpoint_path=path, node_budget=2000))
    # the last call loads the saved counters for finished prefixes
    final = f_min(SearchConfig(6, 3, **OFF, checkpoint_path=path))
    assert final.nodes_explored == ref.nodes_explored
    assert final.minimum == ref.minimum


def test_empty_checkpoint_starts_fresh(tmp_path):
    path = tmp_path / "ck.txt"
    path.write_text("")
    out = f_min(SearchConfig(4, 2, checkpoint_path=str(path)))
    assert out.complete and out.minimum == theorem2_values(4).f
    assert path.read_text().startswith("unionclosed-checkpoint")


def test_budget_marks_incomplete():
    out = f_min(SearchConfig(6, 3, node_budget=10))
    assert not out.complete
    with pytest.raises(RuntimeError):
        f_value(6, 3, node_budget=10)


def test_parallel_matches_serial():
    ser = f_min(SearchConfig(7, 2))
    par = f_min(SearchConfig(7, 2, parallel_width=2))
    assert par.complete and par.minimum == ser.minimum
    assert outcome_classes(par) == outcome_classes(ser)


def test_witness_truncation():
    out = f_min(SearchConfig(2, 2, max_witnesses=1))
    assert out.witness_count == 2 and out.witnesses_truncated and len(out.witnesses) == 1


def test_outcome_json():
    d = f_min(SearchConfig(3, 2)).to_json()
    assert d["minimum"] == 4 and d["witnesses"] == [[[1, 2], [1, 3], [2, 3]]]
    assert {"nodes_explored", "pruned_by_bound", "pruned_by_canonicity",
            "pruned_by_lemma3", "complete"} <= set(d)


def test_config_validation():
    with pytest.raises(DomainError):
        SearchConfig(0, 2)
    with pytest.raises(DomainError):
        SearchConfig(3, 2, upper_bound_seed="lex")
    with pytest.raises(DomainError):
        SearchConfig(3, 2, canon_interval=0)
