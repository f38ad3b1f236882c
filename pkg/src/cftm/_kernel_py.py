"""Pure-Python run kernel over an integer-encoded machine.

Mirrors ``_kernel.pyx`` operation for operation so both produce identical
floating-point results. Keep the two in sync.

Encoding: symbols are tape-alphabet indices, states are state indices,
directions are -1/0/+1. ``off``/``idx`` is a CSR index of transitions by
read symbol.
"""

from math import sqrt

HALT_NO_ACTIVE = 0
HALT_INPUT_CONSUMED = 1
HALT_STEP_BUDGET = 2
HALT_HEAD_UNDERFLOW = 3


def _f1(code, param, mu, d, t):
    if code == 0:
        return (mu + d) / 2.0
    if code == 1:
        return sqrt(mu * d)
    if code == 2:
        return mu if mu < d else d
    if code == 3:
        return mu if mu > d else d
    if code == 4:
        return mu * d
    if code == 5:
        s = (mu ** param + d ** param) ** (1.0 / param)
        return 1.0 if s > 1.0 else s
    if code == 6:
        if t < param:
            return mu if mu > d else d
        return mu if mu < d else d
    return d


def _sorted_sum(vals):
    total = 0.0
    for v in sorted(vals):
        total += v
    return total


def _f2(code, vals):
    n = len(vals)
    if code == 0:
        return max(vals)
    lo = min(vals)
    hi = max(vals)
    if code == 1:
        m = _sorted_sum(vals) / n
    else:
        p = 1.0
        for v in sorted(vals):
            p *= v
        m = p ** (1.0 / n)
    return lo if m < lo else hi if m > hi else m


def _choose(code, keys, f1s, mus, sign):
    """Argmax over distinct keys by (primary, mu, sigma, sign*key)."""
    best = None
    best_score = None
    for k in sorted(set(keys)):
        group = [i for i in range(len(keys)) if keys[i] == k]
        gf = [f1s[i] for i in group]
        sigma = _sorted_sum(gf)
        if code == 0:
            primary = max(gf)
            mu = max(mus[i] for i in group if f1s[i] == primary)
        else:
            primary = sigma if code == 1 else float(sum(1 for v in gf if v > 0.0))
            mu = max(mus[i] for i in group)
        score = (primary, mu, sigma, sign * k)
        if best_score is None or score > best_score:
            best, best_score = k, score
    return best


def run(src, rd, dst, wr, mvdir, weight, off, idx, tape, head, mv, t,
        blank, f1_code, f1_param, f2_code, f3_code, f4_code,
        quiescent, max_steps, persist):
    """Run to halt; returns ``(tape, head, mv, t, halt_code, underflow_write)``.

    ``underflow_write`` is the symbol written by a step that halted on head
    underflow, else -1; the tape already contains it.
    """
    tape = list(tape)
    mv = list(mv)
    n_states = len(mv)
    while True:
        sym = tape[head] if head < len(tape) else blank
        if not quiescent and sym == blank:
            return tape, head, mv, t, HALT_INPUT_CONSUMED, -1
        act = []
        f1s = []
        mus = []
        for k in range(off[sym], off[sym + 1]):
            i = idx[k]
            mu = mv[src[i]]
            if mu != 0.0:
                act.append(i)
                f1s.append(_f1(f1_code, f1_param, mu, weight[i], t))
                mus.append(mu)
        if not act:
            return tape, head, mv, t, HALT_NO_ACTIVE, -1
        if t >= max_steps:
            return tape, head, mv, t, HALT_STEP_BUDGET, -1

        new = list(mv) if persist else [0.0] * n_states
        for j in range(n_states):
            cand = [f1s[e] for e in range(len(act)) if dst[act[e]] == j]
            if len(cand) == 1:
                new[j] = cand[0]
            elif cand:
                new[j] = _f2(f2_code, cand)

        w = _choose(f3_code, [wr[i] for i in act], f1s, mus, -1)
        d = _choose(f4_code, [mvdir[i] for i in act], f1s, mus, 1)
        if head >= len(tape):
            tape.extend([blank] * (head + 1 - len(tape)))
        tape[head] = w
        if d == -1 and head == 0:
            return tape, head, mv, t, HALT_HEAD_UNDERFLOW, w
        mv = new
        head += d
        t += 1
