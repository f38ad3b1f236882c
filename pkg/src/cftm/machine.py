"""Static machine description: states, alphabets, weighted transitions.

A machine is immutable once built. Structural queries (successor and
predecessor sets) are pure functions of the definition, and :func:`validate`
reports invariant breaches as data instead of raising.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from cftm.errors import DomainError, InvalidMachineError


class Direction(enum.IntEnum):
    """Head movement, encoded as the integer offset applied to the head."""

    LEFT = -1
    STAY = 0
    RIGHT = 1

    @property
    def letter(self) -> str:
        return "LSR"[self.value + 1]

    @classmethod
    def from_letter(cls, letter: str) -> "Direction":
        try:
            return cls("LSR".index(letter.upper()) - 1)
        except ValueError:
            raise DomainError(f"unknown direction {letter!r}; expected L, S or R") from None


@dataclass(frozen=True)
class Transition:
    """A weighted 5-tuple ``(source, read, target, write, direction)``."""

    source: str
    read: str
    target: str
    write: str
    direction: Direction
    weight: float

    @property
    def key(self) -> tuple[str, str, str, str, int]:
        return (self.source, self.read, self.target, self.write, int(self.direction))

    def __str__(self) -> str:
        return (
            f"({self.source},{self.read},{self.target},{self.write},"
            f"{self.direction.letter}) @ {self.weight!r}"
        )


@dataclass(frozen=True)
class Violation:
    """One invariant breach: a stable machine-readable code plus a message."""

    code: str
    message: str
    location: str | None = None

    def __str__(self) -> str:
        where = f" [{self.location}]" if self.location else ""
        return f"{self.code}{where}: {self.message}"


@dataclass(frozen=True)
class MachineDefinition:
    """States, alphabets, transitions and start/final sets of a fuzzy TM.

    ``states`` is ordered; that order fixes the index of every state in the
    membership-value vector. ``start_states`` maps each start state to its
    initial membership value.
    """

    states: tuple[str, ...]
    input_alphabet: tuple[str, ...]
    tape_alphabet: tuple[str, ...]
    blank: str
    transitions: tuple[Transition, ...]
    start_states: Mapping[str, float]
    final_states: frozenset[str] = field(default_factory=frozenset)

    @classmethod
    def build(
        cls,
        states: Iterable[str],
        input_alphabet: Iterable[str],
        tape_alphabet: Iterable[str],
        blank: str,
        transitions: Iterable[Transition | tuple],
        start_states: Mapping[str, float] | Iterable[str],
        final_states: Iterable[str] = (),
        *,
        check: bool = True,
    ) -> "MachineDefinition":
        """Convenience constructor accepting loose containers.

        Transitions may be given as :class:`Transition` objects or as
        ``(src, read, dst, write, direction, weight)`` tuples, where
        ``direction`` is a :class:`Direction`, an int, or one of ``L/S/R``.
        A bare iterable of start states gets initial mv 1.0 each.
        """
        trans = []
        for t in transitions:
            if not isinstance(t, Transition):
                src, read, dst, write, d, w = t
                if isinstance(d, str):
                    d = Direction.from_letter(d)
                t = Transition(src, read, dst, write, Direction(d), float(w))
            trans.append(t)
        if not isinstance(start_states, Mapping):
            start_states = {q: 1.0 for q in start_states}
        machine = cls(
            states=tuple(states),
            input_alphabet=tuple(input_alphabet),
            tape_alphabet=tuple(tape_alphabet),
            blank=blank,
            transitions=tuple(trans),
            start_states=dict(start_states),
            final_states=frozenset(final_states),
        )
        if check:
            violations = validate(machine)
            if violations:
                raise InvalidMachineError(violations)
        return machine

    @cached_property
    def state_index(self) -> dict[str, int]:
        return {q: i for i, q in enumerate(self.states)}

    @cached_property
    def symbol_index(self) -> dict[str, int]:
        return {a: i for i, a in enumerate(self.tape_alphabet)}

    @cached_property
    def transitions_by_read(self) -> dict[str, tuple[int, ...]]:
        """Transition indices grouped by read symbol, in declaration order."""
        out: dict[str, list[int]] = {a: [] for a in self.tape_alphabet}
        for i, t in enumerate(self.transitions):
            out.setdefault(t.read, []).append(i)
        return {a: tuple(ix) for a, ix in out.items()}

    @property
    def is_deterministic(self) -> bool:
        """True when no (state, symbol) pair has more than one transition."""
        seen = set()
        for t in self.transitions:
            if (t.source, t.read) in seen:
                return False
            seen.add((t.source, t.read))
        return True


def _is_token(s: object) -> bool:
    return isinstance(s, str) and s != "" and not any(c.isspace() for c in s)


def validate(machine: MachineDefinition) -> list[Violation]:
    """Return every invariant violation of ``machine``; empty iff valid."""
    out: list[Violation] = []

    def bad(code: str, message: str, location: str | None = None) -> None:
        out.append(Violation(code, message, location))

    if not machine.states:
        bad("NO_STATES", "machine declares no states")
    seen: set[str] = set()
    for q in machine.states:
        if not _is_token(q):
            bad("BAD_TOKEN", f"state id {q!r} must be a non-empty token without whitespace")
        if q in seen:
            bad("DUPLICATE_STATE", f"state {q!r} declared twice")
        seen.add(q)
    states = set(machine.states)

    for name, alphabet in (("input", machine.input_alphabet), ("tape", machine.tape_alphabet)):
        seen = set()
        for a in alphabet:
            if not _is_token(a):
                bad("BAD_TOKEN", f"{name} symbol {a!r} must be a non-empty token without whitespace")
            if a in seen:
                bad("DUPLICATE_SYMBOL", f"{name} symbol {a!r} declared twice")
            seen.add(a)
    gamma = set(machine.tape_alphabet)
    for a in machine.input_alphabet:
        if a not in gamma:
            bad("INPUT_NOT_IN_TAPE", f"input symbol {a!r} missing from the tape alphabet")
    if machine.blank not in gamma:
        bad("BLANK_NOT_IN_TAPE", f"blank {machine.blank!r} missing from the tape alphabet")
    if machine.blank in set(machine.input_alphabet):
        bad("BLANK_IN_INPUT", f"blank {machine.blank!r} must not be an input symbol")

    if not machine.start_states:
        bad("NO_START", "machine declares no start state")
    for q, mv in machine.start_states.items():
        if q not in states:
            bad("UNKNOWN_STATE", f"start state {q!r} is not declared", "start")
        if not (isinstance(mv, (int, float)) and 0.0 < mv <= 1.0):
            bad("START_MV_RANGE", f"initial mv of {q!r} must lie in (0, 1], got {mv!r}", "start")
    for q in sorted(machine.final_states):
        if q not in states:
            bad("UNKNOWN_STATE", f"final state {q!r} is not declared", "final")

    keys: set[tuple] = set()
    for i, t in enumerate(machine.transitions):
        loc = f"transitions[{i}]"
        for role, q in (("source", t.source), ("target", t.target)):
            if q not in states:
                bad("UNKNOWN_STATE", f"{role} state {q!r} is not declared", loc)
        for role, a in (("read", t.read), ("write", t.write)):
            if a not in gamma:
                bad("UNKNOWN_SYMBOL", f"{role} symbol {a!r} is not in the tape alphabet", loc)
        if not isinstance(t.direction, Direction):
            bad("BAD_DIRECTION", f"direction {t.direction!r} is not a Direction", loc)
        w = t.weight
        if not (isinstance(w, (int, float)) and 0.0 <= w <= 1.0):
            bad("WEIGHT_RANGE", f"weight {w!r} outside [0, 1]", loc)
        if t.key in keys:
            bad("DUPLICATE_TRANSITION", f"transition {t} repeats an earlier 5-tuple", loc)
        keys.add(t.key)
    return out


def _check_query(machine: MachineDefinition, state: str, symbol: str) -> None:
    if state not in machine.state_index:
        raise DomainError(f"unknown state {state!r}")
    if symbol not in machine.symbol_index:
        raise DomainError(f"unknown symbol {symbol!r}")


def successor_set(machine: MachineDefinition, state: str, symbol: str) -> set[str]:
    """States reachable from ``state`` in one move when ``symbol`` is read."""
    _check_query(machine, state, symbol)
    return {t.target for t in machine.transitions if t.source == state and t.read == symbol}


def predecessor_set(machine: MachineDefinition, state: str, symbol: str) -> set[str]:
    """States that move into ``state`` in one move when ``symbol`` is read."""
    _check_query(machine, state, symbol)
    return {t.source for t in machine.transitions if t.target == state and t.read == symbol}


def ensure_valid(machine: MachineDefinition) -> MachineDefinition:
    violations = validate(machine)
    if violations:
        raise InvalidMachineError(violations)
    return machine


__all__: Sequence[str] = (
    "Direction",
    "Transition",
    "Violation",
    "MachineDefinition",
    "validate",
    "ensure_valid",
    "successor_set",
    "predecessor_set",
)
