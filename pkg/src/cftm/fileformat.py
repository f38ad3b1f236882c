"""Line-oriented machine description format.

Example::

    # comments run to end of line
    states: q0 q1 q2
    input:  a b
    tape:   a b x B
    blank:  B
    start:  q0@1            # initial mv optional, default 1
    final:  q2
    trans:  q0 a -> q1 x R @ 0.5
    trans:  q1 b -> q2 b L @ 0.9
    config: f1=mean f2=gmean halt=quiescent

Directives may appear in any order. ``trans:`` and ``config:`` may repeat;
every other directive appears at most once. The order of ``states:`` fixes
the mv-vector index of each state.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

from cftm.engine import DEFAULT_MAX_STEPS, ResolutionConfig
from cftm.errors import CFTMError, MachineFileError
from cftm.machine import Direction, MachineDefinition, Transition, validate

SINGLE = ("states", "input", "tape", "blank", "start", "final")
REQUIRED = ("states", "input", "tape", "blank", "start")
CONFIG_KEYS = ("f1", "f2", "f3", "f4", "halt", "max-steps", "accept-f2", "mv-update")

_DIRECTIVE = re.compile(r"^\s*([A-Za-z][\w-]*)\s*:(.*)$")
_TRANS = re.compile(
    r"^\s*(?P<src>\S+)\s+(?P<read>\S+)\s*->\s*(?P<dst>\S+)\s+(?P<write>\S+)\s+(?P<dir>\S+)"
    r"\s*@\s*(?P<weight>\S+)\s*$"
)


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    code: str
    message: str
    kind: str = "syntax"

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.code}: {self.message}"


def _tokens(body: str, offset: int) -> list[tuple[str, int]]:
    """Whitespace-separated tokens with their 1-based column."""
    return [(m.group(), offset + m.start() + 1) for m in re.finditer(r"\S+", body)]


def _num(text: str) -> float:
    v = float(text)
    if v != v:
        raise ValueError("nan")
    return v


def parse_machine(text: str) -> tuple[MachineDefinition, ResolutionConfig]:
    """Parse and validate a machine document.

    Raises:
        MachineFileError: carrying every syntax and validation diagnostic,
            each with a 1-based line and column.
    """
    diags: list[Diagnostic] = []
    seen: dict[str, int] = {}
    fields: dict[str, list[tuple[str, int]]] = {}
    trans: list[Transition] = []
    trans_lines: list[tuple[int, int]] = []  # (line, weight column)
    config: dict[str, str] = {}
    start: dict[str, float] = {}

    def err(line, col, code, msg):
        diags.append(Diagnostic(line, col, code, msg))

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _DIRECTIVE.match(line)
        if not m:
            err(lineno, 1, "MALFORMED", f"expected '<directive>: ...', got {raw.strip()!r}")
            continue
        name, body = m.group(1), m.group(2)
        body_col = m.start(2)
        if name in SINGLE:
            if name in seen:
                err(lineno, m.start(1) + 1, "DUPLICATE_DIRECTIVE",
                    f"'{name}:' already given on line {seen[name]}")
                continue
            seen[name] = lineno
            toks = _tokens(body, body_col)
            if name == "blank" and len(toks) != 1:
                err(lineno, body_col + 1, "MALFORMED", "'blank:' takes exactly one symbol")
                continue
            if name == "start":
                for tok, col in toks:
                    q, at, mv = tok.partition("@")
                    try:
                        value = _num(mv) if at else 1.0
                    except ValueError:
                        err(lineno, col, "MALFORMED", f"bad initial mv in {tok!r}")
                        continue
                    if q in start:
                        err(lineno, col, "DUPLICATE_STATE", f"start state {q!r} listed twice")
                    start[q] = value
            fields[name] = toks
        elif name == "trans":
            tm = _TRANS.match(body)
            if not tm:
                err(lineno, body_col + 1, "MALFORMED",
                    "expected 'trans: <src> <read> -> <dst> <write> <L|S|R> @ <weight>'")
                continue
            try:
                d = Direction.from_letter(tm.group("dir")) if len(tm.group("dir")) == 1 else None
            except CFTMError:
                d = None
            if d is None:
                err(lineno, body_col + tm.start("dir") + 1, "BAD_DIRECTION",
                    f"direction must be L, S or R, got {tm.group('dir')!r}")
                continue
            try:
                w = _num(tm.group("weight"))
            except ValueError:
                err(lineno, body_col + tm.start("weight") + 1, "MALFORMED",
                    f"weight {tm.group('weight')!r} is not a number")
                continue
            trans.append(Transition(tm.group("src"), tm.group("read"), tm.group("dst"),
                                    tm.group("write"), d, w))
            trans_lines.append((lineno, body_col + tm.start("weight") + 1))
        elif name == "config":
            for tok, col in _tokens(body, body_col):
                key, eq, value = tok.partition("=")
                if not eq or key not in CONFIG_KEYS:
                    err(lineno, col, "BAD_CONFIG",
                        f"expected key=value with key in {', '.join(CONFIG_KEYS)}, got {tok!r}")
                elif key in config:
                    err(lineno, col, "BAD_CONFIG", f"config key {key!r} given twice")
                else:
                    config[key] = value
            seen.setdefault("config", lineno)
        else:
            err(lineno, m.start(1) + 1, "UNKNOWN_DIRECTIVE", f"unknown directive {name!r}")

    for name in REQUIRED:
        if name not in seen:
            err(0, 0, "MISSING_DIRECTIVE", f"missing '{name}:' directive")

    resolution = None
    try:
        resolution = ResolutionConfig.from_specs(
            f1=config.get("f1", "gmean"), f2=config.get("f2", "gmean"),
            f3=config.get("f3", "max-weight"), f4=config.get("f4", "max-weight"),
            halt=config.get("halt", "consume-input"),
            max_steps=int(config.get("max-steps", DEFAULT_MAX_STEPS)),
            acceptance_f2=config.get("accept-f2"), mv_update=config.get("mv-update", "reset"),
        )
    except (CFTMError, ValueError) as exc:
        err(seen.get("config", 0), 1, "BAD_CONFIG", str(exc))

    if diags:
        raise MachineFileError(diags)

    def words(name):
        return tuple(tok for tok, _ in fields.get(name, ()))

    machine = MachineDefinition(
        states=words("states"),
        input_alphabet=words("input"),
        tape_alphabet=words("tape"),
        blank=words("blank")[0],
        transitions=tuple(trans),
        start_states=start,
        final_states=frozenset(words("final")),
    )
    directive_of = {
        "NO_STATES": "states", "DUPLICATE_STATE": "states", "INPUT_NOT_IN_TAPE": "input",
        "BLANK_NOT_IN_TAPE": "blank", "BLANK_IN_INPUT": "blank", "NO_START": "start",
        "START_MV_RANGE": "start",
    }
    for v in validate(machine):
        if v.location and v.location.startswith("transitions["):
            line, wcol = trans_lines[int(v.location[12:-1])]
            col = wcol if v.code == "WEIGHT_RANGE" else 1
        else:
            line = seen.get(v.location or directive_of.get(v.code, ""), 0)
            col = 1
        diags.append(Diagnostic(line, col, v.code, v.message, kind="validation"))
    if diags:
        raise MachineFileError(sorted(diags, key=lambda d: (d.line, d.column)))
    return machine, resolution


def load_machine(path) -> tuple[MachineDefinition, ResolutionConfig]:
    with open(path, encoding="utf-8") as fh:
        return parse_machine(fh.read())


def _fmt(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def serialize(machine: MachineDefinition, resolution: ResolutionConfig | None = None) -> str:
    """Canonical text form; ``parse_machine(serialize(m, r)) == (m, r)``."""
    finals = [q for q in machine.states if q in machine.final_states]
    lines = [
        "states: " + " ".join(machine.states),
        "input: " + " ".join(machine.input_alphabet),
        "tape: " + " ".join(machine.tape_alphabet),
        "blank: " + machine.blank,
        "start: " + " ".join(f"{q}@{_fmt(mv)}" for q, mv in machine.start_states.items()),
        ("final: " + " ".join(finals)).rstrip(),
    ]
    for t in machine.transitions:
        lines.append(f"trans: {t.source} {t.read} -> {t.target} {t.write} "
                     f"{t.direction.letter} @ {_fmt(t.weight)}")
    if resolution is not None:
        cfg = resolution.as_dict()
        parts = [f"{k}={cfg[k]}" for k in ("f1", "f2", "f3", "f4", "halt", "max-steps")]
        if resolution.acceptance_f2 is not None:
            parts.append(f"accept-f2={cfg['accept-f2']}")
        if resolution.mv_update != "reset":
            parts.append(f"mv-update={resolution.mv_update}")
        lines.append("config: " + " ".join(parts))
    return "\n".join(lines) + "\n"


def machine_digest(machine: MachineDefinition) -> str:
    """SHA-256 of the canonical serialization (without config)."""
    return hashlib.sha256(serialize(machine).encode("utf-8")).hexdigest()
