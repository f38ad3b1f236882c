import json

import pytest

import cftm
from cftm import CFTMError, parse_machine, run
from cftm.trace import SCHEMA_VERSION, document, replay, resolution_from_header, run_document


def test_document_shape(abc_prefix):
    machine, res = abc_prefix
    doc, result = run_document(machine, "abc", res)
    lines = [json.loads(x) for x in doc.splitlines()]
    assert [x["record"] for x in lines] == ["header", "step", "step", "step", "footer"]
    head, foot = lines[0], lines[-1]
    assert head["schema"] == SCHEMA_VERSION and head["input"] == ["a", "b", "c"]
    assert head["resolution"]["f1"] == "mean"
    assert [x["mv"][x["t"] + 1] for x in lines[1:-1]] == pytest.approx([0.55, 0.325, 0.3625], abs=1e-12)
    assert foot["acceptance_degree"] == pytest.approx(0.3625, abs=1e-12) and foot["accepted"] is True
    assert list(foot["final_mvs"]) == ["q3"] and foot["steps"] == 3


def test_f2_events_recorded(merge3):
    res = cftm.ResolutionConfig.from_specs(f1="gmean", f2="amean")
    doc, _ = run_document(merge3, "a", res)
    step = json.loads(doc.splitlines()[1])
    [event] = step["f2"]
    assert event["state"] == "q2" and len(event["candidates"]) == 3
    assert [a["f1"] for a in step["active"]][0] == pytest.approx(0.6, abs=1e-15)


def test_documents_are_byte_identical(branching):
    machine, res = branching
    docs = {run_document(machine, "abab", res)[0] for _ in range(20)}
    assert len(docs) == 1


def test_document_matches_untraced_result(anbncn):
    machine, res = anbncn
    doc, traced = run_document(machine, "aabbcc", res)
    fast = run(machine, "aabbcc", res, trace=False)
    foot = json.loads(doc.splitlines()[-1])
    assert foot["mv"] == list(fast.config.mv)
    assert foot["acceptance_degree"] == fast.acceptance_degree


@pytest.mark.parametrize("name", ["abc_prefix", "anbncn", "branching", "chain"])
def test_replay_reproduces(name):
    text = cftm.bundled_machine(name)
    machine, res = parse_machine(text)
    word = {"abc_prefix": "abc", "anbncn": "abc", "branching": "abba", "chain": "aaa"}[name]
    doc, _ = run_document(machine, word, res.replace(acceptance_f2=cftm.f2_strategy("max")))
    assert replay(doc, text) == doc


def test_replay_detects_other_machine(chain):
    machine, res = chain
    doc, _ = run_document(machine, "aaa", res)
    with pytest.raises(CFTMError, match="digest"):
        replay(doc, cftm.bundled_machine("branching"))


def test_replay_rejects_non_trace():
    with pytest.raises(CFTMError):
        replay('{"record":"step"}\n', cftm.bundled_machine("chain"))


def test_header_resolution_round_trip(branching):
    machine, res = branching
    doc = document(machine, "ab", res, run(machine, "ab", res))
    assert resolution_from_header(json.loads(doc.splitlines()[0])) == res
