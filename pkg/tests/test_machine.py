import dataclasses
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cftm import (
    Direction,
    DomainError,
    InvalidMachineError,
    MachineDefinition,
    Transition,
    predecessor_set,
    successor_set,
    validate,
)

from conftest import random_machine


def codes(machine):
    return {v.code for v in validate(machine)}


def test_anbncn_machine_is_valid(anbncn):
    machine, _ = anbncn
    assert validate(machine) == []
    assert len(machine.states) == 6
    assert machine.is_deterministic


def test_blank_in_input_is_reported(chain):
    machine, _ = chain
    bad = dataclasses.replace(machine, input_alphabet=("a", "B"))
    assert "BLANK_IN_INPUT" in codes(bad)


def test_weight_out_of_range_is_reported(chain):
    machine, _ = chain
    t = dataclasses.replace(machine.transitions[0], weight=1.3)
    bad = dataclasses.replace(machine, transitions=(t,) + machine.transitions[1:])
    [v] = [v for v in validate(bad) if v.code == "WEIGHT_RANGE"]
    assert v.location == "transitions[0]"


@pytest.mark.parametrize("change, code", [
    (dict(tape_alphabet=("a",)), "BLANK_NOT_IN_TAPE"),
    (dict(input_alphabet=("a", "z")), "INPUT_NOT_IN_TAPE"),
    (dict(start_states={}), "NO_START"),
    (dict(start_states={"q0": 0.0}), "START_MV_RANGE"),
    (dict(start_states={"nope": 1.0}), "UNKNOWN_STATE"),
    (dict(final_states=frozenset({"qq"})), "UNKNOWN_STATE"),
    (dict(states=("q0", "q1", "q2", "q3", "q3")), "DUPLICATE_STATE"),
    (dict(states=()), "NO_STATES"),
])
def test_invariant_breaches(chain, change, code):
    machine, _ = chain
    assert code in codes(dataclasses.replace(machine, **change))


def test_undeclared_write_symbol_is_rejected(chain):
    machine, _ = chain
    t = dataclasses.replace(machine.transitions[0], write="x")
    bad = dataclasses.replace(machine, transitions=(t,))
    assert codes(bad) == {"UNKNOWN_SYMBOL"}


def test_duplicate_five_tuple_is_rejected(chain):
    machine, _ = chain
    t = machine.transitions[0]
    bad = dataclasses.replace(machine, transitions=(t, dataclasses.replace(t, weight=0.1)))
    assert codes(bad) == {"DUPLICATE_TRANSITION"}


def test_parallel_transitions_differing_in_write_are_allowed():
    MachineDefinition.build(["p", "q"], ["a"], ["a", "b", "B"], "B",
                            [("p", "a", "q", "a", "R", 0.5), ("p", "a", "q", "b", "R", 0.5),
                             ("p", "a", "q", "b", "L", 0.2)], ["p"])


def test_build_raises_on_violation():
    with pytest.raises(InvalidMachineError) as info:
        MachineDefinition.build(["p"], ["a"], ["a", "B"], "a", [], ["p"])
    assert "BLANK_IN_INPUT" in {v.code for v in info.value.violations}


def test_successor_set_merge3(merge3):
    assert successor_set(merge3, "q1", "a") == {"q2"}
    assert successor_set(merge3, "q1", "b") == set()


def test_predecessor_set_merge3(merge3):
    assert predecessor_set(merge3, "q2", "a") == {"q1", "q0", "q5"}
    assert predecessor_set(merge3, "q1", "a") == set()


def test_successor_set_has_set_semantics():
    # q0 -a-> q1 twice (writes differ); enumerated by hand: {q1}
    m = MachineDefinition.build(["q0", "q1"], ["a"], ["a", "b", "B"], "B",
                                [("q0", "a", "q1", "a", "R", 0.3), ("q0", "a", "q1", "b", "R", 0.6)],
                                ["q0"])
    assert successor_set(m, "q0", "a") == {"q1"}


def test_self_loop_is_its_own_predecessor():
    m = MachineDefinition.build(["q"], ["a"], ["a", "B"], "B", [("q", "a", "q", "a", "S", 1)], ["q"])
    assert "q" in predecessor_set(m, "q", "a")


def test_queries_reject_unknown_names(merge3):
    with pytest.raises(DomainError):
        successor_set(merge3, "zz", "a")
    with pytest.raises(DomainError):
        predecessor_set(merge3, "q1", "?")


def test_direction_encoding():
    assert [int(d) for d in (Direction.LEFT, Direction.STAY, Direction.RIGHT)] == [-1, 0, 1]
    assert Direction.from_letter("r") is Direction.RIGHT
    with pytest.raises(DomainError):
        Direction.from_letter("U")


def test_state_index_is_declaration_order():
    m = MachineDefinition.build(["z", "a", "m"], ["x"], ["x", "B"], "B", [], ["m"])
    assert m.state_index == {"z": 0, "a": 1, "m": 2}


def test_validate_is_pure(chain):
    machine, _ = chain
    assert validate(machine) == validate(machine) == []


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_successor_predecessor_duality(seed):
    m = random_machine(random.Random(seed))
    for q in m.states:
        for a in m.tape_alphabet:
            for q2 in m.states:
                assert (q2 in successor_set(m, q, a)) == (q in predecessor_set(m, q2, a))


def test_transition_str():
    t = Transition("q0", "a", "q1", "x", Direction.RIGHT, 0.1)
    assert str(t) == "(q0,a,q1,x,R) @ 0.1"
