"""Comprehensive fuzzy Turing machines.

States carry membership values that are updated every step through
pluggable resolution strategies; a conventional ID-tree evaluator is
included as an oracle and cost baseline.
"""

from cftm.baseline import IdNode, TreeResult, count_growth, evaluate, expand
from cftm.engine import (
    ActiveTransitionSet,
    Configuration,
    Halt,
    ResolutionConfig,
    RunResult,
    Tape,
    TraceRecord,
    acceptance_degree,
    active_transitions,
    initialize,
    run,
    step,
)
from cftm.errors import (
    CFTMError,
    DomainError,
    InputError,
    InvalidMachineError,
    MachineFileError,
    StrategyError,
)
from cftm.fileformat import load_machine, machine_digest, parse_machine, serialize
from cftm.machine import (
    Direction,
    MachineDefinition,
    Transition,
    Violation,
    predecessor_set,
    successor_set,
    validate,
)
from cftm.strategies import (
    ChoiceStrategy,
    F1Strategy,
    F2Strategy,
    choice_strategy,
    eval_f1,
    f1_strategy,
    f2_strategy,
    resolve_f2,
    resolve_f3,
    resolve_f4,
    validate_strategy_axioms,
)

__version__ = "0.1.0"


def bundled_machine(name: str) -> str:
    """Text of a machine file shipped in ``cftm/machines`` (e.g. ``"anbncn"``)."""
    from importlib.resources import files

    return files("cftm").joinpath("machines", f"{name}.cftm").read_text(encoding="utf-8")
