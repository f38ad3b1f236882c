"""Time the run kernel backends against each other and the traced loop.

    python3 benchmarks/bench_kernel.py [--n 200] [--repeat 5]

Workloads: the a^n b^n c^n decider on a long accepted word (quadratic run,
one active state) and a dense random nondeterministic machine (many active
transitions per step).
"""

import argparse
import random
import time

import cftm
from cftm import MachineDefinition, ResolutionConfig, kernel, parse_machine, run


def dense_machine(seed=1, n_states=12):
    rng = random.Random(seed)
    states = [f"s{i}" for i in range(n_states)]
    tape = ["a", "b", "B"]
    trans = {}
    for q in states:
        for a in ("a", "b"):
            for _ in range(4):
                key = (q, a, rng.choice(states), rng.choice(tape),
                       rng.choice("LSR") if rng.random() < 0.3 else "R")
                trans.setdefault(key, round(rng.uniform(0.05, 1.0), 3))
    return MachineDefinition.build(states, ["a", "b"], tape, "B",
                                   [k + (w,) for k, w in trans.items()],
                                   {"s0": 1.0}, states[-3:])


def best(fn, repeat):
    out, times = None, []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return out, min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200, help="block length for a^n b^n c^n")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    anbncn, res = parse_machine(cftm.bundled_machine("anbncn"))
    dense = dense_machine()
    rng = random.Random(7)
    workloads = [
        (f"anbncn n={args.n}", anbncn, "a" * args.n + "b" * args.n + "c" * args.n, res),
        ("dense 12 states, |w|=5000", dense, "".join(rng.choice("ab") for _ in range(5000)),
         ResolutionConfig.from_specs(f1="gmean", f2="amean", f3="sigma-count", f4="cardinality")),
    ]
    print(f"default backend: {kernel.BACKEND}; available: {', '.join(kernel.available_backends())}")
    for title, machine, word, resolution in workloads:
        print(f"\n{title}")
        results = {}
        ref, t_traced = best(lambda: run(machine, word, resolution), 1)
        print(f"  {'traced engine':16}{t_traced * 1e3:10.1f} ms  steps={ref.steps}")
        for b in kernel.available_backends():
            results[b] = best(lambda: run(machine, word, resolution, trace=False, backend=b), args.repeat)
            print(f"  {b + ' kernel':16}{results[b][1] * 1e3:10.1f} ms")
        same = all(r.config == ref.config and r.acceptance_degree == ref.acceptance_degree
                   for r, _ in results.values())
        if "compiled" in results:
            print(f"  speedup compiled/python: {results['python'][1] / results['compiled'][1]:.1f}x")
        print(f"  identical results: {same}")


if __name__ == "__main__":
    main()
