"""Run-kernel backend selection.

The compiled extension ``cftm._kernel`` is used when it imports; otherwise
the pure-Python twin ``cftm._kernel_py`` is. Setting the environment
variable ``CFTM_PURE_PYTHON=1`` forces the fallback at import time.
"""

from __future__ import annotations

import os
from array import array

from cftm import _kernel_py
from cftm.engine import HALT_REASONS, Configuration, ResolutionConfig, Tape
from cftm.machine import MachineDefinition

_compiled = None
if os.environ.get("CFTM_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from cftm import _kernel as _compiled
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"
_BACKENDS = {"python": _kernel_py}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled


def available_backends() -> tuple[str, ...]:
    return tuple(_BACKENDS)


def encode(machine: MachineDefinition) -> dict:
    """Integer arrays describing ``machine``; cached on the instance."""
    cache = vars(machine)
    enc = cache.get("_kernel_encoding")
    if enc is not None:
        return enc
    sidx, aidx = machine.state_index, machine.symbol_index
    ts = machine.transitions
    off, idx = array("i", [0]), array("i")
    by_read = machine.transitions_by_read
    for a in machine.tape_alphabet:
        idx.extend(by_read.get(a, ()))
        off.append(len(idx))
    enc = {
        "src": array("i", [sidx[t.source] for t in ts]),
        "rd": array("i", [aidx[t.read] for t in ts]),
        "dst": array("i", [sidx[t.target] for t in ts]),
        "wr": array("i", [aidx[t.write] for t in ts]),
        "mvdir": array("i", [int(t.direction) for t in ts]),
        "weight": array("d", [float(t.weight) for t in ts]),
        "off": off,
        "idx": idx,
    }
    cache["_kernel_encoding"] = enc
    return enc


def run_config(machine: MachineDefinition, config: Configuration,
               resolution: ResolutionConfig, backend: str | None = None
               ) -> tuple[Configuration, str]:
    """Run ``config`` to halt on the selected backend, without tracing."""
    impl = _BACKENDS[backend or BACKEND]
    enc = encode(machine)
    aidx = machine.symbol_index
    f1 = resolution.f1
    tape, head, mv, t, code, _ = impl.run(
        enc["src"], enc["rd"], enc["dst"], enc["wr"], enc["mvdir"], enc["weight"],
        enc["off"], enc["idx"],
        [aidx[a] for a in config.tape.cells], config.head, list(config.mv), config.t,
        aidx[machine.blank], f1.code, float(f1.param or 0.0), resolution.f2.code,
        resolution.f3.code, resolution.f4.code, resolution.halt == "quiescent",
        resolution.max_steps, resolution.mv_update == "persist",
    )
    gamma = machine.tape_alphabet
    out = Configuration(Tape(tuple(gamma[i] for i in tape), machine.blank), head, tuple(mv), t)
    return out, HALT_REASONS[code]
