# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled run kernel; operation-for-operation twin of ``_kernel_py.py``.

Compiled without -ffast-math: results must match the Python fallback bit
for bit, so evaluation order and libm calls mirror it exactly.
"""

from libc.math cimport pow, sqrt
from libc.stdlib cimport free, malloc, realloc

cdef enum:
    HALT_NO_ACTIVE = 0
    HALT_INPUT_CONSUMED = 1
    HALT_STEP_BUDGET = 2
    HALT_HEAD_UNDERFLOW = 3


cdef inline double _f1(int code, double param, double mu, double d, long t) noexcept nogil:
    cdef double s
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
        s = pow(pow(mu, param) + pow(d, param), 1.0 / param)
        return 1.0 if s > 1.0 else s
    if code == 6:
        if <double>t < param:
            return mu if mu > d else d
        return mu if mu < d else d
    return d


cdef inline void _isort(double* a, int n) noexcept nogil:
    cdef int i, j
    cdef double x
    for i in range(1, n):
        x = a[i]
        j = i - 1
        while j >= 0 and a[j] > x:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = x


cdef inline double _sorted_sum(double* a, int n) noexcept nogil:
    cdef int i
    cdef double total = 0.0
    _isort(a, n)
    for i in range(n):
        total += a[i]
    return total


cdef double _f2(int code, double* vals, int n) noexcept nogil:
    cdef int i
    cdef double lo = vals[0], hi = vals[0], m, p
    for i in range(1, n):
        if vals[i] > hi:
            hi = vals[i]
        if vals[i] < lo:
            lo = vals[i]
    if code == 0:
        return hi
    _isort(vals, n)
    if code == 1:
        m = 0.0
        for i in range(n):
            m += vals[i]
        m = m / n
    else:
        p = 1.0
        for i in range(n):
            p *= vals[i]
        m = pow(p, 1.0 / n)
    if m < lo:
        return lo
    if m > hi:
        return hi
    return m


cdef int _choose(int code, int* keys, double* f1s, double* mus, int n, int sign,
                 double* scratch) noexcept nogil:
    cdef int e, e2, k, m, best = 0, have = 0
    cdef double primary, mu, sigma, cnt
    cdef double bp = 0.0, bm = 0.0, bs = 0.0
    cdef long br = 0, rank
    for e in range(n):
        k = keys[e]
        # skip keys already scored at an earlier entry
        for e2 in range(e):
            if keys[e2] == k:
                break
        else:
            m = 0
            primary = -1.0
            cnt = 0.0
            for e2 in range(e, n):
                if keys[e2] == k:
                    scratch[m] = f1s[e2]
                    m += 1
                    if f1s[e2] > primary:
                        primary = f1s[e2]
                    if f1s[e2] > 0.0:
                        cnt += 1.0
            mu = -1.0
            for e2 in range(e, n):
                if keys[e2] == k:
                    if code != 0 or f1s[e2] == primary:
                        if mus[e2] > mu:
                            mu = mus[e2]
            sigma = _sorted_sum(scratch, m)
            if code == 1:
                primary = sigma
            elif code == 2:
                primary = cnt
            rank = sign * k
            if (not have or primary > bp or (primary == bp and (mu > bm or (mu == bm and (
                    sigma > bs or (sigma == bs and rank > br)))))):
                have = 1
                best = k
                bp = primary
                bm = mu
                bs = sigma
                br = rank
    return best


def run(const int[:] src, const int[:] rd, const int[:] dst, const int[:] wr,
        const int[:] mvdir, const double[:] weight, const int[:] off, const int[:] idx,
        tape_in, long head, mv_in, long t, int blank, int f1_code, double f1_param,
        int f2_code, int f3_code, int f4_code, bint quiescent, long max_steps, bint persist):
    """Run to halt; returns ``(tape, head, mv, t, halt_code, underflow_write)``."""
    cdef int n_states = len(mv_in)
    cdef int n_trans = src.shape[0]
    cdef long length = len(tape_in), cap = length + 16
    cdef int* tape = <int*>malloc(cap * sizeof(int))
    cdef double* mv = <double*>malloc((n_states + 1) * sizeof(double))
    cdef double* new = <double*>malloc((n_states + 1) * sizeof(double))
    cdef double* f1s = <double*>malloc((n_trans + 1) * sizeof(double))
    cdef double* mus = <double*>malloc((n_trans + 1) * sizeof(double))
    cdef double* cand = <double*>malloc((n_trans + 1) * sizeof(double))
    cdef int* act = <int*>malloc((n_trans + 1) * sizeof(int))
    cdef int* keys = <int*>malloc((n_trans + 1) * sizeof(int))
    cdef int* grown
    cdef double* swap
    cdef int i, j, k, e, n_act, n_cand, sym, w = -1, d = 0, code = HALT_NO_ACTIVE
    cdef double mu
    if not (tape and mv and new and f1s and mus and cand and act and keys):
        free(tape); free(mv); free(new); free(f1s); free(mus); free(cand); free(act); free(keys)
        raise MemoryError()
    try:
        for i in range(length):
            tape[i] = tape_in[i]
        for i in range(n_states):
            mv[i] = mv_in[i]
        with nogil:
            while True:
                sym = tape[head] if head < length else blank
                if not quiescent and sym == blank:
                    code = HALT_INPUT_CONSUMED
                    break
                n_act = 0
                for k in range(off[sym], off[sym + 1]):
                    i = idx[k]
                    mu = mv[src[i]]
                    if mu != 0.0:
                        act[n_act] = i
                        f1s[n_act] = _f1(f1_code, f1_param, mu, weight[i], t)
                        mus[n_act] = mu
                        n_act += 1
                if n_act == 0:
                    code = HALT_NO_ACTIVE
                    break
                if t >= max_steps:
                    code = HALT_STEP_BUDGET
                    break

                for j in range(n_states):
                    new[j] = mv[j] if persist else 0.0
                for j in range(n_states):
                    n_cand = 0
                    for e in range(n_act):
                        if dst[act[e]] == j:
                            cand[n_cand] = f1s[e]
                            n_cand += 1
                    if n_cand == 1:
                        new[j] = cand[0]
                    elif n_cand > 1:
                        new[j] = _f2(f2_code, cand, n_cand)

                for e in range(n_act):
                    keys[e] = wr[act[e]]
                w = _choose(f3_code, keys, f1s, mus, n_act, -1, cand)
                for e in range(n_act):
                    keys[e] = mvdir[act[e]]
                d = _choose(f4_code, keys, f1s, mus, n_act, 1, cand)

                if head >= length:
                    if head >= cap:
                        cap = 2 * cap + head
                        grown = <int*>realloc(tape, cap * sizeof(int))
                        if not grown:
                            with gil:
                                raise MemoryError()
                        tape = grown
                    for i in range(length, head + 1):
                        tape[i] = blank
                    length = head + 1
                tape[head] = w
                if d == -1 and head == 0:
                    code = HALT_HEAD_UNDERFLOW
                    break
                swap = mv
                mv = new
                new = swap
                head += d
                t += 1
        return ([tape[i] for i in range(length)], head, [mv[i] for i in range(n_states)], t, code,
                w if code == HALT_HEAD_UNDERFLOW else -1)
    finally:
        free(tape); free(mv); free(new); free(f1s); free(mus); free(cand); free(act); free(keys)
