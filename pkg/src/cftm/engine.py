"""CFTM execution: one instantaneous description (tape, head, mv vector)
advanced step by step.

Each step builds the active transition set for the symbol under the head,
assigns successor membership values through F1, merges competing values
through F2, writes the F3 symbol and moves the head by the F4 direction.

:func:`run` records a full trace on the pure-Python path below. With
``trace=False`` and built-in strategies it hands the loop to the run kernel
(compiled when available, see :mod:`cftm.kernel`), which produces the same
final configuration bit for bit.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Sequence, Union

from cftm.errors import DomainError, InputError
from cftm.machine import Direction, MachineDefinition, Transition
from cftm.strategies import (
    ChoiceStrategy,
    F1Strategy,
    F2Strategy,
    choice_strategy,
    f1_strategy,
    f2_strategy,
    resolve_f2,
    resolve_f3,
    resolve_f4,
)

HALT_MODES = ("consume-input", "quiescent")
MV_UPDATES = ("reset", "persist")
HALT_REASONS = ("no-active-transitions", "input-consumed", "step-budget", "head-underflow")
DEFAULT_MAX_STEPS = 1_000_000


@dataclass(frozen=True)
class ResolutionConfig:
    """Chosen F1..F4 strategies plus halting mode and step budget.

    ``acceptance_f2`` defaults to ``f2``. ``mv_update="persist"`` keeps the
    mv of states that no active transition targets instead of zeroing it.
    """

    f1: F1Strategy = field(default_factory=lambda: f1_strategy("gmean"))
    f2: F2Strategy = field(default_factory=lambda: f2_strategy("gmean"))
    f3: ChoiceStrategy = field(default_factory=lambda: choice_strategy("max-weight"))
    f4: ChoiceStrategy = field(default_factory=lambda: choice_strategy("max-weight"))
    halt: str = "consume-input"
    max_steps: int = DEFAULT_MAX_STEPS
    acceptance_f2: F2Strategy | None = None
    mv_update: str = "reset"

    def __post_init__(self):
        if self.halt not in HALT_MODES:
            raise DomainError(f"halt mode must be one of {HALT_MODES}, got {self.halt!r}")
        if self.mv_update not in MV_UPDATES:
            raise DomainError(f"mv update must be one of {MV_UPDATES}, got {self.mv_update!r}")
        if not isinstance(self.max_steps, int) or self.max_steps < 1:
            raise DomainError(f"max_steps must be a positive integer, got {self.max_steps!r}")

    @classmethod
    def from_specs(cls, f1="gmean", f2="gmean", f3="max-weight", f4="max-weight",
                   halt="consume-input", max_steps=DEFAULT_MAX_STEPS,
                   acceptance_f2=None, mv_update="reset") -> "ResolutionConfig":
        return cls(
            f1=f1 if isinstance(f1, F1Strategy) else f1_strategy(f1),
            f2=f2 if isinstance(f2, F2Strategy) else f2_strategy(f2),
            f3=f3 if isinstance(f3, ChoiceStrategy) else choice_strategy(f3),
            f4=f4 if isinstance(f4, ChoiceStrategy) else choice_strategy(f4),
            halt=halt,
            max_steps=int(max_steps),
            acceptance_f2=(acceptance_f2 if acceptance_f2 is None or isinstance(acceptance_f2, F2Strategy)
                           else f2_strategy(acceptance_f2)),
            mv_update=mv_update,
        )

    def replace(self, **changes) -> "ResolutionConfig":
        return dataclasses.replace(self, **changes)

    @property
    def accept_f2(self) -> F2Strategy:
        return self.acceptance_f2 or self.f2

    def as_dict(self) -> dict:
        return {
            "f1": self.f1.spec,
            "f2": self.f2.spec,
            "f3": self.f3.spec,
            "f4": self.f4.spec,
            "halt": self.halt,
            "max-steps": self.max_steps,
            "accept-f2": self.accept_f2.spec,
            "mv-update": self.mv_update,
        }


@dataclass(frozen=True)
class Tape:
    """Tape with a leftmost cell 0, unbounded to the right.

    ``cells`` holds the written extent; anything beyond reads as ``blank``.
    """

    cells: tuple[str, ...]
    blank: str

    def read(self, index: int) -> str:
        return self.cells[index] if index < len(self.cells) else self.blank

    def write(self, index: int, symbol: str) -> "Tape":
        cells = list(self.cells)
        if index >= len(cells):
            cells.extend([self.blank] * (index + 1 - len(cells)))
        cells[index] = symbol
        return Tape(tuple(cells), self.blank)

    def content(self) -> str:
        """Space-joined cells with trailing blanks stripped."""
        cells = list(self.cells)
        while cells and cells[-1] == self.blank:
            cells.pop()
        return " ".join(cells)


@dataclass(frozen=True)
class Configuration:
    """Instantaneous description: tape, head index, mv vector, step count."""

    tape: Tape
    head: int
    mv: tuple[float, ...]
    t: int = 0

    @property
    def symbol(self) -> str:
        return self.tape.read(self.head)


@dataclass(frozen=True)
class ActiveTransitionSet:
    """Active transitions for the read symbol, each with its F1 value.

    ``entries`` holds ``(transition, f1_value, predecessor_mv)`` triples in
    machine declaration order.
    """

    read: str
    entries: tuple[tuple[Transition, float, float], ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)


@dataclass(frozen=True)
class TraceRecord:
    """What happened during one step."""

    t: int
    head: int
    read: str
    active: ActiveTransitionSet
    f2_events: tuple[tuple[str, tuple[float, ...], float], ...]
    write: str
    direction: Direction
    mv: tuple[float, ...]


@dataclass(frozen=True)
class Halt:
    """Signal returned by :func:`step` when the machine cannot move."""

    reason: str
    config: Configuration


@dataclass(frozen=True)
class RunResult:
    config: Configuration
    halt_reason: str
    acceptance_degree: float
    accepted: bool
    trace: tuple[TraceRecord, ...] = ()

    @property
    def steps(self) -> int:
        return self.config.t

    def final_mvs(self, machine: MachineDefinition) -> dict[str, float]:
        """Nonzero membership values of final states, in declaration order."""
        return {q: m for q, m in zip(machine.states, self.config.mv)
                if q in machine.final_states and m != 0.0}


def initialize(machine: MachineDefinition, input: Union[str, Sequence[str]]) -> Configuration:
    """Initial ID: input written from cell 0, head at 0, start mvs set.

    ``input`` is either a sequence of symbols or a string; a string is split
    on whitespace when it contains any, otherwise into characters.

    Raises:
        InputError: if a symbol is outside the input alphabet.
    """
    symbols = split_input(input)
    allowed = set(machine.input_alphabet)
    for i, a in enumerate(symbols):
        if a not in allowed:
            raise InputError(f"input symbol {a!r} at position {i} is not in the input alphabet")
    mv = [0.0] * len(machine.states)
    for q, m in machine.start_states.items():
        mv[machine.state_index[q]] = float(m)
    return Configuration(Tape(tuple(symbols), machine.blank), 0, tuple(mv), 0)


def split_input(input: Union[str, Sequence[str]]) -> tuple[str, ...]:
    if isinstance(input, str):
        return tuple(input.split()) if any(c.isspace() for c in input) else tuple(input)
    return tuple(input)


def active_transitions(machine: MachineDefinition, config: Configuration,
                       f1: F1Strategy) -> ActiveTransitionSet:
    """Transitions reading the head symbol whose source mv is nonzero."""
    a = config.symbol
    mv = config.mv
    sidx = machine.state_index
    entries = []
    for i in machine.transitions_by_read.get(a, ()):
        t = machine.transitions[i]
        mu = mv[sidx[t.source]]
        if mu != 0.0:
            entries.append((t, f1.func(mu, t.weight, config.t), mu))
    return ActiveTransitionSet(a, tuple(entries))


def step(machine: MachineDefinition, config: Configuration,
         resolution: ResolutionConfig) -> tuple[Configuration, TraceRecord] | Halt:
    """Advance one move, or return a :class:`Halt` signal.

    On head underflow (LEFT at cell 0) the resolved symbol is still written
    but the move is not taken: the returned halt configuration keeps the
    previous mv vector and step count.
    """
    active = active_transitions(machine, config, resolution.f1)
    if not active:
        return Halt("no-active-transitions", config)

    sidx = machine.state_index
    candidates: dict[int, list[float]] = {}
    for t, v, _ in active.entries:
        candidates.setdefault(sidx[t.target], []).append(v)
    new_mv = [0.0] * len(machine.states) if resolution.mv_update == "reset" else list(config.mv)
    events = []
    for j in sorted(candidates):
        vals = candidates[j]
        if len(vals) == 1:
            new_mv[j] = vals[0]
        else:
            new_mv[j] = resolve_f2(resolution.f2, vals)
            events.append((machine.states[j], tuple(vals), new_mv[j]))

    write = resolve_f3(resolution.f3, active, machine.tape_alphabet)
    direction = resolve_f4(resolution.f4, active)
    tape = config.tape.write(config.head, write)
    if direction == Direction.LEFT and config.head == 0:
        return Halt("head-underflow", dataclasses.replace(config, tape=tape))

    mv = tuple(new_mv)
    record = TraceRecord(config.t, config.head, active.read, active, tuple(events),
                         write, direction, mv)
    return Configuration(tape, config.head + int(direction), mv, config.t + 1), record


def acceptance_degree(machine: MachineDefinition, config: Configuration, f2: F2Strategy) -> float:
    """F2 over the nonzero mvs of final states; 0 when there are none."""
    vals = [m for q, m in zip(machine.states, config.mv) if q in machine.final_states and m != 0.0]
    return resolve_f2(f2, vals)


def run(machine: MachineDefinition, input: Union[str, Sequence[str]],
        resolution: ResolutionConfig | None = None, *, trace: bool = True,
        backend: str | None = None) -> RunResult:
    """Run from the initial ID until a halt condition fires.

    Args:
        machine: a validated machine.
        input: input string (see :func:`initialize`).
        resolution: strategies and halting policy; defaults apply when None.
        trace: record a :class:`TraceRecord` per step. When False and every
            strategy is a built-in, the run kernel is used instead.
        backend: force ``"compiled"`` or ``"python"`` for the untraced kernel.
    """
    resolution = resolution or ResolutionConfig()
    config = initialize(machine, input)
    if not trace and kernel_supports(resolution):
        from cftm import kernel

        config, reason = kernel.run_config(machine, config, resolution, backend=backend)
        return _finish(machine, config, reason, resolution, ())

    records = []
    while True:
        if resolution.halt == "consume-input" and config.symbol == machine.blank:
            reason = "input-consumed"
            break
        if config.t >= resolution.max_steps:
            # the budget only stops a machine that could still move
            active = active_transitions(machine, config, resolution.f1)
            reason = "step-budget" if active else "no-active-transitions"
            break
        out = step(machine, config, resolution)
        if isinstance(out, Halt):
            reason, config = out.reason, out.config
            break
        config, record = out
        if trace:
            records.append(record)
    return _finish(machine, config, reason, resolution, tuple(records))


def kernel_supports(resolution: ResolutionConfig) -> bool:
    return resolution.f1.code is not None and resolution.f2.code is not None


def _finish(machine, config, reason, resolution, records) -> RunResult:
    degree = acceptance_degree(machine, config, resolution.accept_f2)
    return RunResult(config, reason, degree, degree > 0.0, records)
