"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

import json
import sys
import time
from math import comb

import pytest

from unionclosed.cli import main as cli_main
from unionclosed.closure import union_closure
from unionclosed.harness import (check_constructions, check_kruskal_katona,
                                 check_lemma_properties, check_prop9, check_theorem2)
from unionclosed.orders import initial_segment
from unionclosed.search import SearchConfig, f_min
from unionclosed.setcore import canonical_masks

LINES = []


def emit(capsys, name, ok, detail, elapsed, limit):
    within = limit is None or elapsed <= limit
    mark = "PASS" if ok and within else "FAIL"
    budget = f", limit {limit:g}s" if limit else ""
    line = f"[{mark}] {name}: {detail} ({elapsed:.2f}s{budget})"
    LINES.append(line)
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)
    assert ok, line
    assert within, line


def test_ac1_counterexample_cli(capsys, tmp_path):
    report = tmp_path / "r.json"
    capsys.readouterr()
    t0 = time.perf_counter()
    code = cli_main(["verify", "counterexample", "--report", str(report)])
    elapsed = time.perf_counter() - t0
    capsys.readouterr()
    computed = json.loads(report.read_text())["reports"][0]["computed"]
    emit(capsys, "AC1 verify counterexample", code == 0 and computed == [12, 13],
         f"exit {code}, sizes {computed}", elapsed, 1.0)


def test_ac2_theorem2(capsys):
    t0 = time.perf_counter()
    reps = check_theorem2(n_max=8)
    elapsed = time.perf_counter() - t0
    vals = " ".join(f"{r.parameters['n']}:{r.computed['f']}/{r.expected}" for r in reps)
    multi = [r.parameters["n"] for r in reps if r.computed["witness_classes"] > 1]
    emit(capsys, "AC2 f(n,2) formula n<=8", all(r.passed for r in reps),
         f"{vals}; colex unique except n={multi} (colex among optima)", elapsed, 600)


def test_ac3_f_4_3(capsys):
    t0 = time.perf_counter()
    out = f_min(SearchConfig(4, 3))
    elapsed = time.perf_counter() - t0
    target = canonical_masks(initial_segment("colex", 3, 4).sets)
    ok = out.complete and out.minimum == 5 and [w.sets for w in out.witnesses] == [target]
    emit(capsys, "AC3 f(4,3)=5 witness [4]^(3)", ok,
         f"minimum {out.minimum}, witnesses {[w.as_lists() for w in out.witnesses]}",
         elapsed, 60)


def test_ac4_maxlex_conjecture_k3(capsys):
    t0 = time.perf_counter()
    rows, violations = [], []
    for n in range(1, 7):
        predicted = len(union_closure(initial_segment("maxlex", 3, n).sets))
        out = f_min(SearchConfig(n, 3))
        rows.append(f"{n}:{out.minimum}/{predicted}")
        if not out.complete or out.minimum != predicted:
            violations.append({"n": n, "f": out.minimum, "maxlex": predicted,
                               "witnesses": [w.as_lists() for w in out.witnesses]})
    elapsed = time.perf_counter() - t0
    for v in violations:
        print("violation:", json.dumps(v))
    emit(capsys, "AC4 maxlex closure = f(n,3) n<=6", not violations,
         " ".join(rows) + f", violations {len(violations)}", elapsed, 1800)


def test_ac5_prop9(capsys):
    t0 = time.perf_counter()
    reps = [check_prop9(2), check_prop9(3)]
    elapsed = time.perf_counter() - t0
    detail = "; ".join(f"k={r.parameters['k']} cap={r.parameters['ground_cap']} "
                       f"classes={r.computed['classes']} violations={r.computed['violations']}"
                       for r in reps)
    emit(capsys, "AC5 l >= bk - C(b,2)", all(r.passed for r in reps), detail, elapsed, None)


def test_ac6_kruskal_katona(capsys):
    t0 = time.perf_counter()
    rep = check_kruskal_katona(trials=2000, seed=0, p_max=10)
    elapsed = time.perf_counter() - t0
    emit(capsys, "AC6 KK bound, 2000 seeded families p<=10", rep.passed,
         f"violations {rep.computed['violations']}, lex equalities "
         f"{rep.computed['lex_equalities']}", elapsed, 60)


def test_ac7_lemma_suites(capsys):
    t0 = time.perf_counter()
    rep = check_lemma_properties(trials=1000, seed=0)
    elapsed = time.perf_counter() - t0
    emit(capsys, "AC7 lemma suites, 1000 trials each", rep.passed,
         f"violations {rep.computed['violations']}, trials {rep.computed['trials_run']}",
         elapsed, None)


def test_ac8_constructions(capsys):
    t0 = time.perf_counter()
    rep = check_constructions(t_max=8, k_max=4)
    elapsed = time.perf_counter() - t0
    emit(capsys, "AC8 minus/plus predictions t<=8 k<=4", rep.passed,
         f"cases {rep.computed['cases']}, mismatches above safe t "
         f"{rep.computed['mismatches_above_threshold']} (any t: {rep.computed['mismatches']})",
         elapsed, None)


def test_ac9_pruning_equivalence(capsys):
    t0 = time.perf_counter()
    off = dict(prune_bound=False, prune_lemma3=False, prune_canonicity=False)
    checked, bad = 0, []
    for k in range(1, 4):
        for n in range(1, 6):
            on = f_min(SearchConfig(n, k))
            raw = f_min(SearchConfig(n, k, **off))
            same = (on.complete and raw.complete and on.minimum == raw.minimum
                    and {w.sets for w in on.witnesses} == {w.sets for w in raw.witnesses})
            checked += 1
            if not same:
                bad.append((n, k, on.minimum, raw.minimum))
    elapsed = time.perf_counter() - t0
    emit(capsys, "AC9 pruning off = pruning on, k<=3 n<=5", not bad,
         f"{checked} cases, disagreements {bad}", elapsed, None)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
