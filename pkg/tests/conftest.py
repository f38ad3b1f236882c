from __future__ import annotations

import random

import pytest

import cftm
from cftm import Direction, MachineDefinition, Transition, parse_machine

WEIGHTS = [round(0.05 * k, 2) for k in range(1, 21)]  # coarse grid so ties happen


def random_machine(rng: random.Random, *, deterministic: bool = False, max_states: int = 6,
                   max_symbols: int = 3, density: float = 0.7, max_fanout: int = 3,
                   right_bias: float = 0.0) -> MachineDefinition:
    """Random valid machine with a single start state ``q0`` at mv 1.

    ``right_bias`` is the chance a move is forced to R before the uniform draw.
    """
    n = rng.randint(1, max_states)
    states = [f"q{i}" for i in range(n)]
    inputs = ["a", "b", "c"][: rng.randint(1, max_symbols)]
    tape = inputs + ["x", "B"]
    trans = []
    for q in states:
        for a in tape:
            if rng.random() > density:
                continue
            k = 1 if deterministic else rng.randint(1, max_fanout)
            for _ in range(k):
                t = Transition(q, a, rng.choice(states), rng.choice(tape),
                               Direction.RIGHT if rng.random() < right_bias else rng.choice(list(Direction)),
                               rng.choice(WEIGHTS))
                if all(t.key != u.key for u in trans):
                    trans.append(t)
    finals = [q for q in states if rng.random() < 0.5]
    return MachineDefinition.build(states, inputs, tape, "B", trans, {"q0": 1.0}, finals)


def random_input(rng: random.Random, machine: MachineDefinition, max_len: int = 8) -> list[str]:
    return [rng.choice(machine.input_alphabet) for _ in range(rng.randint(0, max_len))]


def simulate_deterministic(machine: MachineDefinition, word, max_steps: int, halt: str = "consume-input"):
    """Plain dict-based TM run along the unique path.

    Returns ``(final_state, taken_weights, reason)``; independent of both the
    CFTM engine and the ID-tree baseline.
    """
    table = {(t.source, t.read): t for t in machine.transitions}
    tape = dict(enumerate(word))
    (state,) = machine.start_states
    head, weights = 0, []
    while True:
        sym = tape.get(head, machine.blank)
        if halt == "consume-input" and sym == machine.blank:
            return state, weights, "input-consumed"
        t = table.get((state, sym))
        if t is None:
            return state, weights, "no-active-transitions"
        if len(weights) >= max_steps:
            return state, weights, "step-budget"
        tape[head] = t.write
        if t.direction == Direction.LEFT and head == 0:
            return state, weights, "head-underflow"
        head += int(t.direction)
        state = t.target
        weights.append(t.weight)


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def abc_prefix():
    return parse_machine(cftm.bundled_machine("abc_prefix"))


@pytest.fixture
def anbncn():
    return parse_machine(cftm.bundled_machine("anbncn"))


@pytest.fixture
def branching():
    return parse_machine(cftm.bundled_machine("branching"))


@pytest.fixture
def chain():
    return parse_machine(cftm.bundled_machine("chain"))


@pytest.fixture
def merge3():
    """Three predecessors (mvs 0.9, 0.5, 0.1) all moving into q2 on 'a'."""
    return MachineDefinition.build(
        states=["q0", "q1", "q2", "q5"],
        input_alphabet=["a", "b", "c"],
        tape_alphabet=["a", "b", "c", "B"],
        blank="B",
        transitions=[
            ("q1", "a", "q2", "a", "R", 0.4),
            ("q0", "a", "q2", "b", "L", 0.3),
            ("q5", "a", "q2", "c", "R", 0.1),
        ],
        start_states={"q1": 0.9, "q0": 0.5, "q5": 0.1},
        final_states=["q2"],
    )
