"""Trace documents: one JSON object per line.

Line 1 is a header (schema version, machine digest, input, resolution),
then one ``step`` record per move, then a ``footer`` with the halt reason
and acceptance result. Floats are written in shortest round-trip form, so
a document replayed from its header is byte-identical.
"""

from __future__ import annotations

import json
from typing import Sequence

from cftm.engine import ResolutionConfig, RunResult, run, split_input
from cftm.errors import CFTMError
from cftm.fileformat import machine_digest, parse_machine
from cftm.machine import MachineDefinition

SCHEMA_VERSION = 1


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False, allow_nan=False)


def _transition(t) -> str:
    return f"{t.source} {t.read} -> {t.target} {t.write} {t.direction.letter}"


def header(machine: MachineDefinition, input: Sequence[str], resolution: ResolutionConfig) -> dict:
    return {
        "record": "header",
        "schema": SCHEMA_VERSION,
        "machine": machine_digest(machine),
        "input": list(split_input(input)),
        "resolution": resolution.as_dict(),
    }


def document(machine: MachineDefinition, input, resolution: ResolutionConfig,
             result: RunResult) -> str:
    """Serialize a traced run. ``result`` must come from ``run(..., trace=True)``."""
    lines = [_dump(header(machine, input, resolution))]
    for rec in result.trace:
        lines.append(_dump({
            "record": "step",
            "t": rec.t,
            "head": rec.head,
            "read": rec.read,
            "active": [{"transition": _transition(t), "weight": t.weight, "mu": mu, "f1": v}
                       for t, v, mu in rec.active.entries],
            "f2": [{"state": q, "candidates": list(c), "value": v} for q, c, v in rec.f2_events],
            "write": rec.write,
            "move": rec.direction.letter,
            "mv": list(rec.mv),
        }))
    cfg = result.config
    lines.append(_dump({
        "record": "footer",
        "halt": result.halt_reason,
        "steps": result.steps,
        "head": cfg.head,
        "tape": cfg.tape.content(),
        "mv": list(cfg.mv),
        "final_mvs": result.final_mvs(machine),
        "acceptance_degree": result.acceptance_degree,
        "accepted": result.accepted,
    }))
    return "\n".join(lines) + "\n"


def run_document(machine: MachineDefinition, input, resolution: ResolutionConfig) -> tuple[str, RunResult]:
    result = run(machine, input, resolution, trace=True)
    return document(machine, input, resolution, result), result


def resolution_from_header(head: dict) -> ResolutionConfig:
    r = head["resolution"]
    return ResolutionConfig.from_specs(
        f1=r["f1"], f2=r["f2"], f3=r["f3"], f4=r["f4"], halt=r["halt"],
        max_steps=r["max-steps"],
        acceptance_f2=r["accept-f2"] if r["accept-f2"] != r["f2"] else None,
        mv_update=r["mv-update"],
    )


def replay(doc: str, machine_text: str) -> str:
    """Re-run the header of ``doc`` against a machine file's text.

    Raises:
        CFTMError: if the machine's digest differs from the header's.
    """
    head = json.loads(doc.split("\n", 1)[0])
    if head.get("record") != "header" or head.get("schema") != SCHEMA_VERSION:
        raise CFTMError("not a trace document header")
    machine, _ = parse_machine(machine_text)
    if machine_digest(machine) != head["machine"]:
        raise CFTMError("machine digest does not match the trace header")
    resolution = resolution_from_header(head)
    return run_document(machine, head["input"], resolution)[0]
