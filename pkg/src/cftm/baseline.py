"""Conventional ID-based fuzzy TM evaluation by breadth-first tree expansion.

Every nondeterministic choice spawns a new instantaneous description (ID)
with its own tape copy; a path's degree is the t-norm fold of the weights
along it, and the truth degree of the input is the maximum degree over
accepting leaves. Used as an oracle for the CFTM engine on deterministic
machines and as a cost baseline (node count) on nondeterministic ones.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

from cftm.engine import HALT_MODES, Tape, initialize
from cftm.errors import DomainError
from cftm.machine import Direction, MachineDefinition, Transition
from cftm.strategies import F1Strategy, f1_strategy

DEFAULT_NODE_BUDGET = 100_000


@dataclass(frozen=True)
class IdNode:
    state: str
    tape: Tape
    head: int
    degree: float
    depth: int = 0
    parent: "IdNode | None" = field(default=None, repr=False, compare=False)
    via: Transition | None = field(default=None, compare=False)

    def path(self) -> list[Transition]:
        """Transitions taken from the root to this node."""
        out, node = [], self
        while node.via is not None:
            out.append(node.via)
            node = node.parent
        return out[::-1]


@dataclass(frozen=True)
class TreeResult:
    truth_degree: float
    accepting_leaves: int
    nodes: int
    budget_hit: bool
    pruned: int = 0
    best: IdNode | None = field(default=None, repr=False)


def _tnorm(tnorm: F1Strategy | str) -> F1Strategy:
    s = f1_strategy(tnorm) if isinstance(tnorm, str) else tnorm
    if not s.stationary:
        raise DomainError(f"path composition needs a stationary strategy, got {s.spec!r}")
    return s


def matching(machine: MachineDefinition, node: IdNode) -> list[Transition]:
    a = node.tape.read(node.head)
    return [t for t in machine.transitions if t.source == node.state and t.read == a]


def expand(machine: MachineDefinition, node: IdNode, tnorm: F1Strategy | str = "min") -> list[IdNode]:
    """Children of ``node``: one per matching transition, write-then-move.

    A move LEFT from cell 0 emits no child.
    """
    s = _tnorm(tnorm)
    children = []
    for t in matching(machine, node):
        if t.direction == Direction.LEFT and node.head == 0:
            continue
        children.append(IdNode(t.target, node.tape.write(node.head, t.write),
                               node.head + int(t.direction), s.func(node.degree, t.weight, node.depth),
                               node.depth + 1, node, t))
    return children


def evaluate(machine: MachineDefinition, input: Union[str, Sequence[str]],
             tnorm: F1Strategy | str = "min", depth_bound: int | None = None,
             node_budget: int = DEFAULT_NODE_BUDGET, halt: str = "consume-input") -> TreeResult:
    """Expand the ID tree breadth-first and return the input's truth degree.

    A leaf is halted when it reads blank (``consume-input`` mode), has no
    matching transition, or all its moves fall off the left end. Accepting
    leaves are halted leaves in a final state. When ``depth_bound`` or
    ``node_budget`` stops the expansion, ``budget_hit`` is set and the
    degree is a lower bound.
    """
    if halt not in HALT_MODES:
        raise DomainError(f"halt mode must be one of {HALT_MODES}, got {halt!r}")
    root_cfg = initialize(machine, input)
    if depth_bound is None:
        depth_bound = 10 * len(root_cfg.tape.cells) + 10
    if depth_bound < 1 or node_budget < 1:
        raise DomainError("depth bound and node budget must be >= 1")
    s = _tnorm(tnorm)

    queue = deque(IdNode(q, root_cfg.tape, 0, float(mv)) for q, mv in machine.start_states.items())
    nodes = len(queue)
    budget_hit = nodes > node_budget
    pruned = accepting = 0
    best: IdNode | None = None

    while queue:
        node = queue.popleft()
        if halt == "consume-input" and node.tape.read(node.head) == machine.blank:
            leaf = True
        else:
            moves = matching(machine, node)
            if not moves:
                leaf = True
            elif node.depth >= depth_bound or budget_hit:  # a move was possible
                budget_hit = True
                continue
            else:
                children = expand(machine, node, s)
                pruned += len(moves) - len(children)
                leaf = not children
                room = node_budget - nodes
                if len(children) > room:
                    children = children[:room]
                    budget_hit = True
                nodes += len(children)
                queue.extend(children)
        if leaf and node.state in machine.final_states:
            accepting += 1
            if best is None or node.degree > best.degree:
                best = node
    return TreeResult(best.degree if best else 0.0, accepting, nodes, budget_hit, pruned, best)


def count_growth(machine: MachineDefinition, lengths: Sequence[int],
                 make_input: Callable[[int], Sequence[str]] | None = None, **kwargs
                 ) -> list[tuple[int, int]]:
    """Node counts of :func:`evaluate` for inputs of each length.

    Inputs default to the first input symbol repeated ``n`` times; extra
    keyword arguments go to :func:`evaluate`.
    """
    if make_input is None:
        sym = machine.input_alphabet[0]
        make_input = lambda n: [sym] * n  # noqa: E731
    return [(n, evaluate(machine, list(make_input(n)), **kwargs).nodes) for n in lengths]
