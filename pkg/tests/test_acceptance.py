"""Acceptance gate: eight criteria, one PASS/FAIL line each.

Run alone with ``pytest tests/test_acceptance.py`` or ``python3 tests/test_acceptance.py``.
The lines are printed with output capture disabled, so they appear in any
pytest run.
"""

import json
import math
import random
import sys
import time

import pytest
from click.testing import CliRunner

import cftm
from cftm import (
    ResolutionConfig,
    evaluate,
    f1_strategy,
    f2_strategy,
    parse_machine,
    resolve_f2,
    run,
    validate_strategy_axioms,
)
from cftm.cli import main
from cftm.trace import run_document

from conftest import random_input, random_machine


@pytest.fixture
def report(capsys):
    def emit(n, title, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance {n}] {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        assert ok, detail
    return emit


def best_of(fn, repeat=20):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return out, min(times)


def test_1_per_step_regression(report):
    machine, res = parse_machine(cftm.bundled_machine("abc_prefix"))
    assert res.f1.spec == "mean" and res.halt == "consume-input"
    result, secs = best_of(lambda: run(machine, "abc", res))
    mvs = [1.0] + [max(r.mv) for r in result.trace]
    expected = [1.0, 0.55, 0.325, 0.3625]
    ok = (len(mvs) == 4 and all(abs(a - b) <= 1e-12 for a, b in zip(mvs, expected))
          and secs < 1e-3)
    # the full decider passes through the same three values
    full, fres = parse_machine(cftm.bundled_machine("anbncn"))
    prefix = [max(r.mv) for r in run(full, "abc", fres).trace[:3]]
    ok = ok and all(abs(a - b) <= 1e-12 for a, b in zip(prefix, expected[1:]))
    report(1, "per-step mvs on abc", ok, f"mvs={mvs} runtime={secs * 1e3:.3f} ms")


def test_2_multi_membership_value(report):
    cands = [math.sqrt(0.9 * 0.4), math.sqrt(0.5 * 0.3), 0.1]
    v = resolve_f2(f2_strategy("amean"), cands)
    report(2, "amean of three candidates", abs(v - 0.362) <= 5e-3, f"value={v!r}")


def test_3_acceptance_degree(report):
    v = resolve_f2(f2_strategy("gmean"), [0.517, 0.605, 0.659])
    report(3, "gmean of final mvs", abs(v - 0.590) <= 1e-3, f"value={v!r}")


def test_4_axiom_suite(report):
    f1s = ["mean", "gmean", "min", "max", "product", "weight", "yager:0.5", "yager:1",
           "yager:2", "yager:10", "switched:0", "switched:3", "switched:2.5"]
    bad = {}
    for spec in f1s:
        found = validate_strategy_axioms(f1_strategy(spec), 101)
        if found:
            bad[spec] = found
    for name in ["max", "amean", "gmean"]:
        found = validate_strategy_axioms(f2_strategy(name), 1000, seed=0)
        if found:
            bad[name] = found
    report(4, "built-in strategy axioms", not bad,
           f"{len(f1s)} F1 on 101x101, 3 F2 on 1000 multisets, violations={sum(map(len, bad.values()))}")


def test_5_oracle_equivalence(report):
    rng = random.Random(2024)
    res = ResolutionConfig.from_specs(f1="min", max_steps=200)
    t0 = time.perf_counter()
    checked = mismatches = tried = accepted = 0
    while checked < 500:
        tried += 1
        m = random_machine(rng, deterministic=True, max_states=6, max_symbols=3,
                           density=0.9, right_bias=0.5)
        word = random_input(rng, m, 8)
        cf = run(m, word, res, trace=False)
        tree = evaluate(m, word, "min", depth_bound=200)
        assert (cf.halt_reason == "step-budget") == tree.budget_hit
        if tree.budget_hit or cf.steps == 0:
            continue  # not naturally halting, or nothing to compare
        checked += 1
        accepted += tree.truth_degree > 0
        if cf.acceptance_degree != tree.truth_degree:
            mismatches += 1
    secs = time.perf_counter() - t0
    report(5, "CFTM(min) vs ID tree", mismatches == 0 and secs < 10,
           f"{checked} halting machines ({tried} drawn, {accepted} accepting), mismatches={mismatches}, runtime={secs:.2f} s")


def test_6_cost_separation(report, tmp_path):
    path = tmp_path / "branching.cftm"
    path.write_text(cftm.bundled_machine("branching"), encoding="utf-8")
    rows, ok = [], True
    t0 = time.perf_counter()
    for n in (4, 8, 12):
        out = CliRunner().invoke(main, ["compare", str(path), "ab" * (n // 2), "--json",
                                        "--nodes", "100000"])
        r = json.loads(out.output)
        nodes, steps = r["baseline"]["nodes"], r["cftm"]["steps"]
        ok = ok and out.exit_code == 0 and nodes >= 2 ** n and steps <= n
        rows.append(f"n={n}: nodes={nodes} steps={steps}")
    secs = time.perf_counter() - t0
    report(6, "ID-tree growth vs CFTM steps", ok and secs < 5, "; ".join(rows) + f"; {secs:.2f} s")


def test_7_determinism(report):
    cases = [("anbncn", "aabbcc"), ("branching", "abba"), ("abc_prefix", "abc")]
    distinct = []
    for name, word in cases:
        machine, res = parse_machine(cftm.bundled_machine(name))
        docs = {run_document(machine, word, res)[0] for _ in range(100)}
        distinct.append(len(docs))
    report(7, "repeated trace documents", distinct == [1, 1, 1],
           f"distinct documents per case={distinct}")


def test_8_projection(report):
    rng = random.Random(8)
    res = ResolutionConfig.from_specs(f1="weight", max_steps=200)
    checked = wrong = 0
    while checked < 100:
        m = random_machine(rng, deterministic=True)
        result = run(m, random_input(rng, m, 8), res)
        if not result.trace or result.halt_reason == "step-budget":
            continue
        [(t, _, _)] = result.trace[-1].active.entries
        checked += 1
        if result.config.mv[m.state_index[t.target]] != t.weight:
            wrong += 1
    report(8, "f1=weight keeps the last weight", wrong == 0, f"{checked} machines, wrong={wrong}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
