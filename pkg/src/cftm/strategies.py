"""Resolution strategies: membership assignment (F1), multi-membership (F2),
multi-symbol (F3) and multi-direction (F4).

Built-in strategies are addressed by short spec strings, the same strings
used in machine files and on the command line::

    f1:  mean | gmean | min | max | product | weight | yager:<omega> | switched:<t_i>
    f2:  max | amean | gmean
    f3/f4: max-weight | sigma-count | cardinality

Every built-in carries an integer ``code`` understood by the compiled run
kernel; user strategies (``code=None``) always run on the traced Python path.
"""

from __future__ import annotations

import importlib
import math
import random
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Hashable, Iterable, Sequence

from cftm.errors import DomainError, StrategyError
from cftm.machine import Direction, Violation

if TYPE_CHECKING:
    from cftm.engine import ActiveTransitionSet

F1Func = Callable[[float, float, int], float]
F2Func = Callable[[Sequence[float]], float]

F1_CODES = {"mean": 0, "gmean": 1, "min": 2, "max": 3, "product": 4,
            "yager": 5, "switched": 6, "weight": 7}
F2_CODES = {"max": 0, "amean": 1, "gmean": 2}
CHOICE_CODES = {"max-weight": 0, "sigma-count": 1, "cardinality": 2}


@dataclass(frozen=True)
class F1Strategy:
    """Membership assignment ``(mu, delta, t) -> [0, 1]``."""

    name: str
    func: F1Func = field(compare=False, repr=False)
    param: float | None = None
    stationary: bool = True
    code: int | None = None

    @property
    def spec(self) -> str:
        if self.param is None:
            return self.name
        return f"{self.name}:{_fmt_param(self.param)}"

    def __call__(self, mu: float, delta: float, t: int = 0) -> float:
        return self.func(mu, delta, t)


@dataclass(frozen=True)
class F2Strategy:
    """Multi-membership resolution over a finite multiset of values."""

    name: str
    func: F2Func = field(compare=False, repr=False)
    code: int | None = None

    @property
    def spec(self) -> str:
        return self.name

    def __call__(self, values: Sequence[float]) -> float:
        return self.func(values)


@dataclass(frozen=True)
class ChoiceStrategy:
    """Picks one suggestion (symbol for F3, direction for F4) from Δ_Act."""

    name: str

    def __post_init__(self):
        if self.name not in CHOICE_CODES:
            raise StrategyError(
                f"unknown choice strategy {self.name!r}; expected one of {sorted(CHOICE_CODES)}"
            )

    @property
    def code(self) -> int:
        return CHOICE_CODES[self.name]

    @property
    def spec(self) -> str:
        return self.name


F3Strategy = ChoiceStrategy
F4Strategy = ChoiceStrategy


def _fmt_param(p: float) -> str:
    return str(int(p)) if float(p).is_integer() else repr(float(p))


def stable_sum(values: Iterable[float]) -> float:
    """Left-to-right sum over the ascending-sorted values.

    Independent of enumeration order and reproducible bit-for-bit by the
    compiled kernel, which sums the same way.
    """
    total = 0.0
    for v in sorted(values):
        total += v
    return total


def _clamp_mean(m: float, values: Sequence[float]) -> float:
    # a mean lies in [min, max]; clamping absorbs rounding so all-equal inputs return exactly a
    lo, hi = min(values), max(values)
    return lo if m < lo else hi if m > hi else m


# -- F1 built-ins ------------------------------------------------------------

def _mean(mu, delta, t):
    return (mu + delta) / 2.0


def _gmean(mu, delta, t):
    return math.sqrt(mu * delta)


def _min(mu, delta, t):
    return mu if mu < delta else delta


def _max(mu, delta, t):
    return mu if mu > delta else delta


def _product(mu, delta, t):
    return mu * delta


def _weight(mu, delta, t):
    return delta


def _yager(omega: float) -> F1Func:
    inv = 1.0 / omega

    def f(mu, delta, t):
        s = (mu ** omega + delta ** omega) ** inv
        return 1.0 if s > 1.0 else s

    return f


def _switched(t_i: float) -> F1Func:
    def f(mu, delta, t):
        if t < t_i:
            return mu if mu > delta else delta
        return mu if mu < delta else delta

    return f


_F1_SIMPLE = {"mean": _mean, "gmean": _gmean, "min": _min, "max": _max,
              "product": _product, "weight": _weight}


def f1_strategy(spec: str) -> F1Strategy:
    """Resolve an F1 spec string such as ``"mean"`` or ``"yager:2"``."""
    name, _, arg = spec.strip().partition(":")
    if name in _F1_SIMPLE:
        if arg:
            raise StrategyError(f"F1 strategy {name!r} takes no parameter")
        return F1Strategy(name, _F1_SIMPLE[name], code=F1_CODES[name])
    if name in ("yager", "switched"):
        try:
            p = float(arg)
        except ValueError:
            raise StrategyError(f"F1 strategy {name!r} needs a numeric parameter, got {arg!r}") from None
        if name == "yager":
            if not (p > 0 and math.isfinite(p)):
                raise StrategyError(f"yager omega must be a positive finite number, got {arg!r}")
            return F1Strategy(name, _yager(p), param=p, code=F1_CODES[name])
        if not math.isfinite(p):
            raise StrategyError(f"switch time must be finite, got {arg!r}")
        return F1Strategy(name, _switched(p), param=p, stationary=False, code=F1_CODES[name])
    raise StrategyError(f"unknown F1 strategy {spec!r}")


# -- F2 built-ins ------------------------------------------------------------

def _f2_max(values):
    return max(values) if values else 0.0


def _f2_amean(values):
    if not values:
        return 0.0
    return _clamp_mean(stable_sum(values) / len(values), values)


def _f2_gmean(values):
    if not values:
        return 0.0
    p = 1.0
    for v in sorted(values):
        p *= v
    return _clamp_mean(p ** (1.0 / len(values)), values)


_F2 = {"max": _f2_max, "amean": _f2_amean, "gmean": _f2_gmean}


def f2_strategy(spec: str) -> F2Strategy:
    name = spec.strip()
    if name not in _F2:
        raise StrategyError(f"unknown F2 strategy {spec!r}; expected one of {sorted(_F2)}")
    return F2Strategy(name, _F2[name], code=F2_CODES[name])


def choice_strategy(spec: str) -> ChoiceStrategy:
    return ChoiceStrategy(spec.strip())


def load_external(spec: str):
    """Import a user strategy given as ``py:package.module:attribute``.

    The attribute may be an :class:`F1Strategy`/:class:`F2Strategy` or a
    bare callable, which is returned unchanged for the caller to wrap.
    """
    if not spec.startswith("py:"):
        raise StrategyError(f"external strategy spec must start with 'py:', got {spec!r}")
    target = spec[3:]
    mod_name, _, attr = target.rpartition(":")
    if not mod_name or not attr:
        raise StrategyError(f"expected py:<module>:<attribute>, got {spec!r}")
    try:
        obj = getattr(importlib.import_module(mod_name), attr)
    except (ImportError, AttributeError) as exc:
        raise StrategyError(f"cannot load {spec!r}: {exc}") from None
    return obj


# -- operations --------------------------------------------------------------

def _check_unit(name: str, x: float) -> None:
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {x!r}")


def eval_f1(strategy: F1Strategy, mu: float, delta: float, t: int = 0) -> float:
    """Membership value assigned to a successor through one transition.

    Raises:
        DomainError: if ``mu`` or ``delta`` is outside [0, 1].
    """
    _check_unit("mu", mu)
    _check_unit("delta", delta)
    return strategy.func(mu, delta, t)


def resolve_f2(strategy: F2Strategy, candidates: Iterable[float]) -> float:
    """Collapse candidate membership values for one state into one value."""
    values = list(candidates)
    if not values:
        return 0.0
    return strategy.func(values)


def _resolve(strategy: ChoiceStrategy, entries, suggest, rank) -> Hashable:
    """Shared argmax for F3/F4.

    Each distinct suggestion is scored by the lexicographic key
    (primary, predecessor mv, sigma-count, fixed rank), where primary is the
    strategy's own criterion. Entries are ``(transition, f1, mu)`` triples.
    """
    if not entries:
        raise DomainError("cannot resolve an empty active transition set")
    groups: dict[Hashable, list] = {}
    for e in entries:
        groups.setdefault(suggest(e[0]), []).append(e)

    def score(item):
        s, group = item
        f1s = [e[1] for e in group]
        sigma = stable_sum(f1s)
        if strategy.name == "max-weight":
            primary = max(f1s)
            mu = max(e[2] for e in group if e[1] == primary)
        else:
            primary = sigma if strategy.name == "sigma-count" else sum(1 for v in f1s if v > 0)
            mu = max(e[2] for e in group)
        return (primary, mu, sigma, rank(s))

    return max(groups.items(), key=score)[0]


def resolve_f3(strategy: ChoiceStrategy, active: "ActiveTransitionSet",
               symbol_order: Sequence[str] | None = None) -> str:
    """Symbol to write, chosen among the write symbols of the active set.

    Final ties go to the symbol declared first in ``symbol_order`` (the
    machine's tape alphabet); without one, lexicographic order is used.
    """
    entries = list(active.entries)
    if symbol_order is None:
        symbol_order = sorted({e[0].write for e in entries})
    pos = {a: i for i, a in enumerate(symbol_order)}
    return _resolve(strategy, entries, lambda t: t.write, lambda s: -pos.get(s, len(pos)))


def resolve_f4(strategy: ChoiceStrategy, active: "ActiveTransitionSet") -> Direction:
    """Head direction chosen among the directions of the active set.

    Final ties prefer RIGHT over STAY over LEFT.
    """
    return _resolve(strategy, list(active.entries), lambda t: t.direction, int)


def _bad_value(x) -> bool:
    return not isinstance(x, (int, float)) or math.isnan(x)


def validate_strategy_axioms(strategy, samples: int = 101, *, seed: int = 0) -> list[Violation]:
    """Check a strategy against its axioms; return every violation found.

    F1 strategies are checked for range (``0 <= F1 <= 1``) over a
    ``samples`` x ``samples`` grid on [0, 1]^2 and for ``F1(0,0) = 0``,
    ``F1(1,1) = 1``. Non-stationary strategies are sampled at several step
    indices. F2 strategies are checked for range on ``samples`` random
    multisets from a generator seeded with ``seed``, for ``F2(∅) = 0``, and
    for idempotence on all-equal multisets.
    """
    if samples < 1:
        raise DomainError("samples must be >= 1")
    if isinstance(strategy, F2Strategy):
        return _f2_axioms(strategy, samples, seed)
    if isinstance(strategy, F1Strategy):
        return _f1_axioms(strategy, samples)
    raise StrategyError(f"cannot check axioms of {strategy!r}")


def _call(fn, *args):
    try:
        return fn(*args), None
    except Exception as exc:  # a user strategy may raise anything
        return None, f"{type(exc).__name__}: {exc}"


def _f1_axioms(s: F1Strategy, samples: int) -> list[Violation]:
    out = []
    grid = [i / (samples - 1) for i in range(samples)] if samples > 1 else [0.0, 1.0]
    steps = [0]
    if not s.stationary:
        steps = [0, 1, 10, 100, 1000, 10**6]
        if s.param is not None:
            steps += [math.floor(s.param), math.ceil(s.param)]
        steps = sorted(set(x for x in steps if x >= 0))
    for t in steps:
        for mu in grid:
            for d in grid:
                v, err = _call(s.func, mu, d, t)
                if err or _bad_value(v) or not (0.0 <= v <= 1.0):
                    out.append(Violation("AXIOM1_RANGE", f"F1({mu!r},{d!r}) = {err or v!r}", f"t={t}"))
        for args, want in (((0.0, 0.0), 0.0), ((1.0, 1.0), 1.0)):
            v, err = _call(s.func, *args, t)
            if err or v != want:
                out.append(Violation("AXIOM2_BOUNDARY",
                                     f"F1{args} = {err or v!r}, expected {want!r}", f"t={t}"))
    return out


def _f2_axioms(s: F2Strategy, samples: int, seed: int) -> list[Violation]:
    out = []
    rng = random.Random(seed)
    v, err = _call(s.func, [])
    if err or v != 0:
        out.append(Violation("AXIOM4_EMPTY", f"F2(∅) = {err or v!r}, expected 0"))
    for i in range(samples):
        n = rng.randint(1, 8)
        values = [rng.random() for _ in range(n)]
        if rng.random() < 0.2:
            values[rng.randrange(n)] = rng.choice((0.0, 1.0))
        v, err = _call(s.func, values)
        if err or _bad_value(v) or not (0.0 <= v <= 1.0):
            out.append(Violation("AXIOM3_RANGE", f"F2({values!r}) = {err or v!r}", f"sample {i}"))
        a = values[0]
        same = [a] * n
        v, err = _call(s.func, same)
        if err or v != a:
            out.append(Violation("AXIOM5_IDEMPOTENT", f"F2({same!r}) = {err or v!r}, expected {a!r}",
                                 f"sample {i}"))
    for a in (0.0, 1.0, 0.1, 0.7, 1 / 3):
        for n in (1, 2, 3, 7):
            v, err = _call(s.func, [a] * n)
            if err or v != a:
                out.append(Violation("AXIOM5_IDEMPOTENT", f"F2({[a] * n!r}) = {err or v!r}, expected {a!r}"))
    return out
