from math import comb, floor, sqrt

import pytest

from oracles import brute_closure, up_set_count
from unionclosed.closure import closure_size
from unionclosed.constructions import (Kind, all_ksets, build, counterexample_pair,
                                       floor_formula_t, minus_construction, plus_construction,
                                       s_l, theorem2_values, up_set_size)
from unionclosed.orders import initial_segment
from unionclosed.setcore import DomainError, labels_of, mask_of


def brute_size(family):
    return len(brute_closure([labels_of(s) for s in family.sets]))


def test_all_ksets():
    assert all_ksets(3, 2).as_lists() == [[1, 2], [1, 3], [2, 3]]
    assert all_ksets(4, 3).n == 4
    assert all_ksets(5, 5).as_lists() == [[1, 2, 3, 4, 5]]


def test_up_set_size():
    assert up_set_size(4, 3) == 5
    assert up_set_size(5, 3) == 16
    for t in range(1, 9):
        assert up_set_size(t, t) == 1
        for k in range(1, t + 1):
            assert up_set_size(t, k) == up_set_count(t, k)
            if t <= 6:
                assert closure_size(all_ksets(t, k)) == up_set_size(t, k)


def test_theorem2_values():
    assert theorem2_values(3) == (3, 0, 4)
    assert theorem2_values(5) == (4, 1, 10)
    assert theorem2_values(6) == (4, 0, 11)
    assert theorem2_values(1) == (2, 0, 1)
    for t in range(2, 12):
        assert theorem2_values(comb(t, 2)).f == 2 ** t - t - 1
    # the floor expression picks the same t as the minimal-t rule
    for n in range(1, 2000):
        assert floor_formula_t(n) == floor(sqrt(2 * n) + 1.5)
        assert floor_formula_t(n) == theorem2_values(n).t or comb(floor_formula_t(n) - 1, 2) == n


def test_colex_segments_realize_formula():
    for n in range(1, 16):
        seg = initial_segment("colex", 2, n)
        assert brute_size(seg) == theorem2_values(n).f


def test_s_l():
    assert s_l(0, 3) == 0
    assert s_l(3, 3) == 1
    assert s_l(2, 2) == 1
    assert s_l(1, 3) == 0
    with pytest.raises(DomainError):
        s_l(6, 3)


def test_minus_examples():
    c = minus_construction(5, 3, 1)
    assert mask_of([1, 2, 5]) not in c.family.sets
    assert c.predicted_size == 15 == brute_size(c.family)
    c = minus_construction(4, 2, 1)
    assert mask_of([1, 4]) not in c.family.sets
    assert c.predicted_size == 10 == theorem2_values(5).f == brute_size(c.family)
    assert minus_construction(5, 3, 0).family == all_ksets(5, 3)


def test_plus_examples():
    c = plus_construction(4, 3, 1)
    assert c.family.as_lists() == [[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4], [1, 2, 5]]
    assert c.predicted_size == 9 == brute_size(c.family)
    c = plus_construction(3, 2, 1)
    assert mask_of([1, 4]) in c.family.sets
    assert c.predicted_size == brute_size(c.family)
    c = plus_construction(4, 2, 4)
    assert c.family.n == comb(5, 2)
    assert all(s < 1 << 6 for s in c.family.sets)


def test_predictions_match_closure_on_small_cases():
    for k in (2, 3, 4):
        for t in range(k, 8):
            for l in range(1, comb(k + 1, 2)):
                if l > comb(t - 1, k - 1) or l >= comb(t, k):
                    with pytest.raises(DomainError):
                        minus_construction(t, k, l)
                    continue
                c = minus_construction(t, k, l)
                assert closure_size(c.family) == c.predicted_size, (t, k, l)
            for l in range(1, t - k + 3):
                c = plus_construction(t, k, l)
                assert closure_size(c.family) == c.predicted_size, (t, k, l)


def test_counterexample_pair():
    a, b = counterexample_pair()
    assert (brute_size(a), brute_size(b)) == (12, 13)
    assert b == initial_segment("colex", 3, 7)
    assert a == initial_segment("maxlex", 3, 7)
    # negative control: a different extension of [4]^(3) does not give 12
    other = initial_segment("colex", 3, 7)
    assert brute_size(other) != 12


def test_build_dispatch():
    assert build("allk", t=4, k=3).predicted_size == 5
    assert build(Kind.COLEX_SEGMENT, k=2, n=3).family.n == 3
    with pytest.raises(DomainError, match="needs --l"):
        build("minus", t=5, k=3)
    rec = build("plus", t=4, k=3, l=1).record()
    assert rec == {"kind": "plus", "params": {"t": 4, "k": 3, "l": 1}, "predicted_size": 9}
