import itertools
import random

import pytest

from cftm import ResolutionConfig, kernel, run
from cftm.engine import kernel_supports

from conftest import random_input, random_machine

F1S = ["mean", "gmean", "min", "max", "product", "yager:0.5", "yager:3", "switched:4", "weight"]
F2S = ["max", "amean", "gmean"]
CHOICES = ["max-weight", "sigma-count", "cardinality"]


def outcome(result):
    c = result.config
    return c.tape.content(), c.head, c.mv, c.t, result.halt_reason, result.acceptance_degree


def test_backend_selection():
    assert kernel.BACKEND in kernel.available_backends()
    assert "python" in kernel.available_backends()


def test_compiled_backend_built():
    if "compiled" not in kernel.available_backends():
        pytest.skip("extension not built (pure-Python fallback in use)")
    assert kernel.BACKEND == "compiled"


def test_custom_strategies_fall_back_to_traced_loop(chain):
    from cftm import F1Strategy

    machine, res = chain
    custom = res.replace(f1=F1Strategy("lukasiewicz", lambda a, b, t: max(0.0, a + b - 1)))
    assert not kernel_supports(custom)
    result = run(machine, "aaa", custom, trace=False)
    assert result.acceptance_degree == pytest.approx(0.2)


def test_encoding_is_cached(anbncn):
    machine, _ = anbncn
    assert kernel.encode(machine) is kernel.encode(machine)


@pytest.mark.parametrize("f1, f2", list(itertools.product(F1S, F2S)))
def test_backends_agree_bitwise(f1, f2):
    rng = random.Random(f"{f1}/{f2}")
    backends = kernel.available_backends()
    for _ in range(25):
        m = random_machine(rng, max_states=5)
        word = random_input(rng, m)
        res = ResolutionConfig.from_specs(
            f1=f1, f2=f2, f3=rng.choice(CHOICES), f4=rng.choice(CHOICES),
            halt=rng.choice(["consume-input", "quiescent"]), max_steps=rng.randint(1, 40),
            mv_update=rng.choice(["reset", "persist"]))
        ref = outcome(run(m, word, res))
        for b in backends:
            assert outcome(run(m, word, res, trace=False, backend=b)) == ref, (b, m, word, res)


def test_head_underflow_on_backends():
    from cftm import MachineDefinition

    m = MachineDefinition.build(["p", "q"], ["a"], ["a", "z", "B"], "B",
                                [("p", "a", "q", "z", "L", 0.5)], ["p"], ["q"])
    res = ResolutionConfig.from_specs(f1="min")
    ref = outcome(run(m, "a", res))
    assert ref[4] == "head-underflow"
    for b in kernel.available_backends():
        assert outcome(run(m, "a", res, trace=False, backend=b)) == ref


@pytest.mark.parametrize("steps", [1, 3, 4, 5])
def test_budget_boundary_on_backends(chain, steps):
    machine, res = chain
    res = res.replace(max_steps=steps)
    ref = outcome(run(machine, "aaaa", res))
    for b in kernel.available_backends():
        assert outcome(run(machine, "aaaa", res, trace=False, backend=b)) == ref


def test_long_quiescent_run_matches(anbncn):
    machine, res = anbncn
    word = "a" * 20 + "b" * 20 + "c" * 20
    ref = outcome(run(machine, word, res))
    assert ref[4] == "no-active-transitions" and ref[5] > 0
    for b in kernel.available_backends():
        assert outcome(run(machine, word, res, trace=False, backend=b)) == ref
