"""``cftm`` command line: run, compare, validate, axioms.

Exit codes: 0 accepted / clean, 1 rejected / violations / mismatch,
2 usage or parse errors.
"""

from __future__ import annotations

import inspect
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import click

from cftm import baseline
from cftm.engine import HALT_MODES, ResolutionConfig, run
from cftm.errors import CFTMError, MachineFileError
from cftm.fileformat import load_machine
from cftm.strategies import (
    F1Strategy,
    F2Strategy,
    f1_strategy,
    f2_strategy,
    load_external,
    validate_strategy_axioms,
)
from cftm.trace import run_document

EXIT_OK, EXIT_REJECT, EXIT_USAGE = 0, 1, 2

EXAMPLES = """
Examples:
  cftm run machine.cftm abc --f1 mean
  cftm run machine.cftm abc --quiet
  cftm compare machine.cftm 0101 --json
  cftm validate machine.cftm
  cftm axioms yager:0.5
"""


def fmt_degree(x: float) -> str:
    # str.format rounds the exact binary value half-to-even
    return f"{x:.6f}"


def _load(path):
    try:
        return load_machine(path)
    except MachineFileError as exc:
        for d in exc.diagnostics:
            click.echo(f"{path}:{d}", err=True)
        sys.exit(EXIT_USAGE)
    except OSError as exc:
        click.echo(f"cannot read {path}: {exc}", err=True)
        sys.exit(EXIT_USAGE)


def _override(resolution: ResolutionConfig, f1, f2, f3, f4, halt, max_steps) -> ResolutionConfig:
    specs = resolution.as_dict()
    try:
        return ResolutionConfig.from_specs(
            f1=f1 or specs["f1"], f2=f2 or specs["f2"], f3=f3 or specs["f3"], f4=f4 or specs["f4"],
            halt=halt or specs["halt"], max_steps=max_steps or specs["max-steps"],
            acceptance_f2=resolution.acceptance_f2, mv_update=resolution.mv_update,
        )
    except CFTMError as exc:
        raise click.UsageError(str(exc)) from None


def resolution_options(fn):
    for opt in reversed([
        click.option("--f1", help="membership assignment: mean, gmean, min, max, product, weight, yager:W, switched:T"),
        click.option("--f2", help="multi-membership resolution: max, amean, gmean"),
        click.option("--f3", help="multi-symbol resolution: max-weight, sigma-count, cardinality"),
        click.option("--f4", help="multi-direction resolution: max-weight, sigma-count, cardinality"),
        click.option("--halt", type=click.Choice(HALT_MODES)),
        click.option("--max-steps", type=click.IntRange(min=1)),
    ]):
        fn = opt(fn)
    return fn


@click.group(epilog=EXAMPLES)
@click.version_option(package_name="cftm", prog_name="cftm")
def main() -> None:
    """Comprehensive fuzzy Turing machine simulator."""


@main.command("run")
@click.argument("machine_file", type=click.Path(dir_okay=False))
@click.argument("inputs", nargs=-1, required=True)
@resolution_options
@click.option("--quiet", is_flag=True, help="print only the acceptance degree (6 decimals)")
@click.option("--trace", "trace_path", type=click.Path(dir_okay=False, writable=True),
              help="write the trace document to this file instead of stdout")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True,
              help="run several inputs concurrently; output keeps input order")
def run_cmd(machine_file, inputs, f1, f2, f3, f4, halt, max_steps, quiet, trace_path, jobs):
    """Run MACHINE_FILE on each INPUT. Exit 0 iff every input is accepted."""
    machine, resolution = _load(machine_file)
    resolution = _override(resolution, f1, f2, f3, f4, halt, max_steps)
    traced = not quiet or trace_path is not None

    def one(word):
        if traced:
            return run_document(machine, word, resolution)
        return None, run(machine, word, resolution, trace=False)

    try:
        if jobs > 1 and len(inputs) > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                outcomes = list(pool.map(one, inputs))
        else:
            outcomes = [one(w) for w in inputs]
    except CFTMError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)

    docs = "".join(doc for doc, _ in outcomes if doc is not None)
    if trace_path is not None:
        with open(trace_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(docs)
    for doc, result in outcomes:
        if quiet or trace_path is not None:
            click.echo(fmt_degree(result.acceptance_degree))
        else:
            click.echo(doc, nl=False)
    sys.exit(EXIT_OK if all(r.accepted for _, r in outcomes) else EXIT_REJECT)


@main.command("compare")
@click.argument("machine_file", type=click.Path(dir_okay=False))
@click.argument("input_word", metavar="INPUT")
@resolution_options
@click.option("--tnorm", default="min", show_default=True, help="path composition for the baseline")
@click.option("--depth", type=click.IntRange(min=1), help="baseline depth bound [10*|input|+10]")
@click.option("--nodes", type=click.IntRange(min=1), default=baseline.DEFAULT_NODE_BUDGET,
              show_default=True, help="baseline node budget")
@click.option("--json", "as_json", is_flag=True, help="emit one JSON object instead of a table")
def compare_cmd(machine_file, input_word, f1, f2, f3, f4, halt, max_steps, tnorm, depth, nodes, as_json):
    """Compare the CFTM run with the ID-tree baseline on INPUT."""
    machine, resolution = _load(machine_file)
    resolution = _override(resolution, f1, f2, f3, f4, halt, max_steps)
    try:
        cftm_result = run(machine, input_word, resolution, trace=False)
        tree = baseline.evaluate(machine, input_word, tnorm, depth, nodes, halt=resolution.halt)
    except CFTMError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)

    verdict = None
    if machine.is_deterministic and resolution.f1.spec == "min" and tnorm == "min":
        verdict = "MATCH" if cftm_result.acceptance_degree == tree.truth_degree else "MISMATCH"
    report = {
        "cftm": {"steps": cftm_result.steps, "degree": cftm_result.acceptance_degree,
                 "halt": cftm_result.halt_reason},
        "baseline": {"nodes": tree.nodes, "degree": tree.truth_degree,
                     "accepting_leaves": tree.accepting_leaves, "pruned": tree.pruned,
                     "budget_hit": tree.budget_hit},
        "deterministic": machine.is_deterministic,
        "verdict": verdict,
    }
    if as_json:
        click.echo(json.dumps(report, separators=(",", ":")))
    else:
        click.echo(f"{'':10}{'work':>10}  {'degree':>10}  note")
        click.echo(f"{'cftm':10}{cftm_result.steps:>10}  {fmt_degree(cftm_result.acceptance_degree):>10}"
                   f"  steps, halt={cftm_result.halt_reason}")
        note = "nodes" + (", budget hit (degree is a lower bound)" if tree.budget_hit else "")
        click.echo(f"{'baseline':10}{tree.nodes:>10}  {fmt_degree(tree.truth_degree):>10}  {note}")
        if verdict:
            click.echo(f"verdict: {verdict}")
    sys.exit(EXIT_REJECT if verdict == "MISMATCH" else EXIT_OK)


@main.command("validate")
@click.argument("machine_file", type=click.Path(dir_okay=False))
def validate_cmd(machine_file):
    """Check MACHINE_FILE; exit 1 on invariant violations, 2 on syntax errors."""
    try:
        load_machine(machine_file)
    except MachineFileError as exc:
        for d in exc.diagnostics:
            click.echo(f"{machine_file}:{d}", err=True)
        syntax = any(d.kind == "syntax" for d in exc.diagnostics)
        sys.exit(EXIT_USAGE if syntax else EXIT_REJECT)
    except OSError as exc:
        click.echo(f"cannot read {machine_file}: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    click.echo(f"{machine_file}: valid")


def _resolve_strategies(spec: str, kind: str) -> list:
    if spec.startswith("py:"):
        obj = load_external(spec)
        if isinstance(obj, (F1Strategy, F2Strategy)):
            return [obj]
        if not callable(obj) or kind == "auto":
            raise CFTMError("a bare callable needs --kind f1 or --kind f2")
        if kind == "f2":
            return [F2Strategy(spec, obj)]
        arity = len(inspect.signature(obj).parameters)
        func = obj if arity >= 3 else (lambda mu, d, t: obj(mu, d))
        return [F1Strategy(spec, func)]
    found = []
    for family, make in (("f1", f1_strategy), ("f2", f2_strategy)):
        if kind in ("auto", family):
            try:
                found.append(make(spec))
            except CFTMError:
                pass
    if not found:
        raise CFTMError(f"unknown strategy {spec!r}")
    return found


@main.command("axioms")
@click.argument("strategy")
@click.option("--kind", type=click.Choice(["auto", "f1", "f2"]), default="auto", show_default=True)
@click.option("--samples", type=click.IntRange(min=1),
              help="F1 grid points per axis [101] / F2 random multisets [1000]")
@click.option("--seed", type=int, default=0, show_default=True)
def axioms_cmd(strategy, kind, samples, seed):
    """Check STRATEGY (built-in name or py:module:attr) against its axioms."""
    try:
        strategies = _resolve_strategies(strategy, kind)
    except CFTMError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    dirty = False
    for s in strategies:
        family = "F1" if isinstance(s, F1Strategy) else "F2"
        n = samples or (101 if family == "F1" else 1000)
        violations = validate_strategy_axioms(s, n, seed=seed)
        if violations:
            dirty = True
            click.echo(f"{family} {s.spec}: {len(violations)} violation(s)")
            for v in violations:
                click.echo(f"  {v}")
        else:
            click.echo(f"{family} {s.spec}: clean")
    sys.exit(EXIT_REJECT if dirty else EXIT_OK)


if __name__ == "__main__":
    main()
