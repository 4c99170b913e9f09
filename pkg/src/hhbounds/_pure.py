"""Pure-Python evaluation backend.

`_core.pyx` mirrors every arithmetic expression here verbatim; keep the two
in sync op for op so that results are bit-identical (both sit on the same
libm). Errors are reported as integer codes, never exceptions, so the hot
loops stay allocation-free and the two backends share one calling protocol.
"""

from __future__ import annotations

import math

from .program import (
    ERR_ABS_ZERO,
    ERR_DIV_ZERO,
    ERR_LOG,
    ERR_NONFINITE,
    ERR_OK,
    ERR_POW_BASE,
    ERR_POW_ZERO_NEG,
    ERR_SQRT_NEG,
    ERR_SQRT_ZERO,
    OP_ABS,
    OP_ADD,
    OP_CONST,
    OP_COS,
    OP_DIV,
    OP_EXP,
    OP_LOG,
    OP_MUL,
    OP_NEG,
    OP_POW,
    OP_POW_INT,
    OP_SIN,
    OP_SQRT,
    OP_X,
    STACK_CAP,
)

_INF = math.inf
_U64 = (1 << 64) - 1
_DOUBLE_UNIT = 1.0 / 9007199254740992.0  # 2^-53

MODE_VALUE = 0
MODE_ABS_D2 = 1

KIND_PHI = 0
KIND_LOG = 1
KIND_QUASI = 2
KIND_S = 3


def _exp(v):
    # C exp() overflows to inf silently; match that.
    try:
        return math.exp(v)
    except OverflowError:
        return _INF


def eval_value(ops, args, x):
    """Run the program in value mode. Returns (err, value)."""
    stack = [0.0] * STACK_CAP
    sp = 0
    for i in range(len(ops)):
        op = ops[i]
        if op == OP_CONST:
            stack[sp] = args[i]
            sp += 1
        elif op == OP_X:
            stack[sp] = x
            sp += 1
        elif op == OP_ADD:
            sp -= 1
            stack[sp - 1] = stack[sp - 1] + stack[sp]
        elif op == OP_SUB:
            sp -= 1
            stack[sp - 1] = stack[sp - 1] - stack[sp]
        elif op == OP_MUL:
            sp -= 1
            stack[sp - 1] = stack[sp - 1] * stack[sp]
        elif op == OP_DIV:
            sp -= 1
            if stack[sp] == 0.0:
                return ERR_DIV_ZERO, 0.0
            stack[sp - 1] = stack[sp - 1] / stack[sp]
        elif op == OP_NEG:
            stack[sp - 1] = -stack[sp - 1]
        elif op == OP_POW_INT:
            k = int(args[i])
            base = stack[sp - 1]
            if k < 0:
                if base == 0.0:
                    return ERR_POW_ZERO_NEG, 0.0
                e = -k
            else:
                e = k
            acc = 1.0
            b = base
            while e:
                if e & 1:
                    acc = acc * b
                e >>= 1
                if e:
                    b = b * b
            if k < 0:
                if acc == 0.0:  # |base|^|k| underflowed
                    return ERR_NONFINITE, 0.0
                acc = 1.0 / acc
            stack[sp - 1] = acc
        elif op == OP_POW:
            sp -= 1
            w = stack[sp]
            u = stack[sp - 1]
            if u > 0.0:
                stack[sp - 1] = _exp(w * math.log(u))
            elif u == 0.0:
                if w > 0.0:
                    stack[sp - 1] = 0.0
                elif w == 0.0:
                    stack[sp - 1] = 1.0
                else:
                    return ERR_POW_ZERO_NEG, 0.0
            else:
                return ERR_POW_BASE, 0.0
        elif op == OP_SIN:
            stack[sp - 1] = math.sin(stack[sp - 1])
        elif op == OP_COS:
            stack[sp - 1] = math.cos(stack[sp - 1])
        elif op == OP_EXP:
            stack[sp - 1] = _exp(stack[sp - 1])
        elif op == OP_LOG:
            if stack[sp - 1] <= 0.0:
                return ERR_LOG, 0.0
            stack[sp - 1] = math.log(stack[sp - 1])
        elif op == OP_SQRT:
            if stack[sp - 1] < 0.0:
                return ERR_SQRT_NEG, 0.0
            stack[sp - 1] = math.sqrt(stack[sp - 1])
        else:  # OP_ABS
            stack[sp - 1] = abs(stack[sp - 1])
    v = stack[0]
    if not math.isfinite(v):
        return ERR_NONFINITE, 0.0
    return ERR_OK, v


def eval_jet(ops, args, x):
    """Run the program in jet mode. Returns (err, v, d1, d2)."""
    sv = [0.0] * STACK_CAP
    s1 = [0.0] * STACK_CAP
    s2 = [0.0] * STACK_CAP
    sp = 0
    for i in range(len(ops)):
        op = ops[i]
        if op == OP_CONST:
            sv[sp] = args[i]
            s1[sp] = 0.0
            s2[sp] = 0.0
            sp += 1
        elif op == OP_X:
            sv[sp] = x
            s1[sp] = 1.0
            s2[sp] = 0.0
            sp += 1
        elif op == OP_ADD:
            sp -= 1
            sv[sp - 1] = sv[sp - 1] + sv[sp]
            s1[sp - 1] = s1[sp - 1] + s1[sp]
            s2[sp - 1] = s2[sp - 1] + s2[sp]
        elif op == OP_SUB:
            sp -= 1
            sv[sp - 1] = sv[sp - 1] - sv[sp]
            s1[sp - 1] = s1[sp - 1] - s1[sp]
            s2[sp - 1] = s2[sp - 1] - s2[sp]
        elif op == OP_MUL:
            sp -= 1
            av, a1, a2 = sv[sp - 1], s1[sp - 1], s2[sp - 1]
            bv, b1, b2 = sv[sp], s1[sp], s2[sp]
            sv[sp - 1] = av * bv
            s1[sp - 1] = av * b1 + a1 * bv
            s2[sp - 1] = av * b2 + 2.0 * a1 * b1 + a2 * bv
        elif op == OP_DIV:
            sp -= 1
            av, a1, a2 = sv[sp - 1], s1[sp - 1], s2[sp - 1]
            bv, b1, b2 = sv[sp], s1[sp], s2[sp]
            if bv == 0.0:
                return ERR_DIV_ZERO, 0.0, 0.0, 0.0
            q = av / bv
            q1 = (a1 - q * b1) / bv
            q2 = (a2 - 2.0 * q1 * b1 - q * b2) / bv
            sv[sp - 1] = q
            s1[sp - 1] = q1
            s2[sp - 1] = q2
        elif op == OP_NEG:
            sv[sp - 1] = -sv[sp - 1]
            s1[sp - 1] = -s1[sp - 1]
            s2[sp - 1] = -s2[sp - 1]
        elif op == OP_POW_INT:
            k = int(args[i])
            av, a1, a2 = sv[sp - 1], s1[sp - 1], s2[sp - 1]
            if k < 0 and av == 0.0:
                return ERR_POW_ZERO_NEG, 0.0, 0.0, 0.0
            e = -k if k < 0 else k
            accv, acc1, acc2 = 1.0, 0.0, 0.0
            bv, b1, b2 = av, a1, a2
            while e:
                if e & 1:
                    nv = accv * bv
                    n1 = accv * b1 + acc1 * bv
                    n2 = accv * b2 + 2.0 * acc1 * b1 + acc2 * bv
                    accv, acc1, acc2 = nv, n1, n2
                e >>= 1
                if e:
                    nv = bv * bv
                    n1 = bv * b1 + b1 * bv
                    n2 = bv * b2 + 2.0 * b1 * b1 + b2 * bv
                    bv, b1, b2 = nv, n1, n2
            if k < 0:
                if accv == 0.0:  # |base|^|k| underflowed
                    return ERR_NONFINITE, 0.0, 0.0, 0.0
                q = 1.0 / accv
                q1 = (0.0 - q * acc1) / accv
                q2 = (0.0 - 2.0 * q1 * acc1 - q * acc2) / accv
                accv, acc1, acc2 = q, q1, q2
            sv[sp - 1] = accv
            s1[sp - 1] = acc1
            s2[sp - 1] = acc2
        elif op == OP_POW:
            sp -= 1
            wv, w1, w2 = sv[sp], s1[sp], s2[sp]
            uv, u1, u2 = sv[sp - 1], s1[sp - 1], s2[sp - 1]
            if uv <= 0.0:
                code = ERR_POW_ZERO_NEG if uv == 0.0 else ERR_POW_BASE
                return code, 0.0, 0.0, 0.0
            lv = math.log(uv)
            t = u1 / uv
            l1 = t
            l2 = u2 / uv - t * t
            mv = wv * lv
            m1 = wv * l1 + w1 * lv
            m2 = wv * l2 + 2.0 * w1 * l1 + w2 * lv
            ev = _exp(mv)
            sv[sp - 1] = ev
            s1[sp - 1] = ev * m1
            s2[sp - 1] = ev * m1 * m1 + ev * m2
        elif op == OP_SIN:
            av, a1, a2 = sv[sp - 1], s1[sp - 1], s2[sp - 1]
            s = math.sin(av)
            c = math.cos(av)
            sv[sp - 1] = s
            s1[sp - 1] = c * a1
            s2[sp - 1] = -s * a1 * a1 + c * a2
        elif op == OP_COS:
            av, a1, a2 = sv[sp - 1], s1[sp - 1], s2[sp - 1]
            s = math.sin(av)
            c = math.cos(av)
            sv[sp - 1] = c
            s1[sp - 1] = -s * a1
            s2[sp - 1] = -c * a1 * a1 - s * a2
        elif op == OP_EXP:
            av, a1, a2 = sv[sp - 1], s1[sp - 1], s2[sp - 1]
            ev = _exp(av)
            sv[sp - 1] = ev
            s1[sp - 1] = ev * a1
            s2[sp - 1] = ev * a1 * a1 + ev * a2
        elif op == OP_LOG:
            av, a1, a2 = sv[sp - 1], s1[sp - 1], s2[sp - 1]
            if av <= 0.0:
                return ERR_LOG, 0.0, 0.0, 0.0
            t = a1 / av
            sv[sp - 1] = math.log(av)
            s1[sp - 1] = t
            s2[sp - 1] = a2 / av - t * t
        elif op == OP_SQRT:
            av, a1, a2 = sv[sp - 1], s1[sp - 1], s2[sp - 1]
            if av < 0.0:
                return ERR_SQRT_NEG, 0.0, 0.0, 0.0
            if av == 0.0:
                return ERR_SQRT_ZERO, 0.0, 0.0, 0.0
            r = math.sqrt(av)
            denom = r * av
            if denom == 0.0:  # subnormal operand
                return ERR_NONFINITE, 0.0, 0.0, 0.0
            h = 0.5 / r
            sv[sp - 1] = r
            s1[sp - 1] = h * a1
            s2[sp - 1] = h * a2 - 0.25 * a1 * a1 / denom
        else:  # OP_ABS
            av = sv[sp - 1]
            if av > 0.0:
                pass
            elif av < 0.0:
                sv[sp - 1] = -av
                s1[sp - 1] = -s1[sp - 1]
                s2[sp - 1] = -s2[sp - 1]
            else:
                return ERR_ABS_ZERO, 0.0, 0.0, 0.0
    v, d1, d2 = sv[0], s1[0], s2[0]
    if not (math.isfinite(v) and math.isfinite(d1) and math.isfinite(d2)):
        return ERR_NONFINITE, 0.0, 0.0, 0.0
    return ERR_OK, v, d1, d2


def splitmix64_next(state):
    """Advance one splitmix64 step. Returns (new_state, uniform double in [0,1))."""
    state = (state + 0x9E3779B97F4A7C15) & _U64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _U64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _U64
    z = z ^ (z >> 31)
    return state, (z >> 11) * _DOUBLE_UNIT


def _target_value(ops, args, mode, expo, x):
    if mode == MODE_VALUE:
        err, val = eval_value(ops, args, x)
    else:
        err, _v, _d1, d2 = eval_jet(ops, args, x)
        val = abs(d2)
    if err:
        return err, 0.0
    if expo != 1.0:
        try:
            val = val**expo
        except OverflowError:
            val = _INF
        if not math.isfinite(val):
            return ERR_NONFINITE, 0.0
    return ERR_OK, val


def classify_callable(g, kind, s, a, b, eta, tol, n, seed):
    """Shared falsification loop for an arbitrary callable target.

    Deterministic sample order: the 27 corner triples (u, v in {a, mid, b},
    t in {0, 1/2, 1}) first, then n splitmix64 triples. Returns one of
      (0, checked)                    not falsified
      (1, idx, u, v, t, lhs, rhs)     first predicate violation
      (3, kind, x, gx)                positivity/nonnegativity precondition broke
    Exceptions from g propagate.
    """
    mid = a + 0.5 * (b - a)
    pts = (a, mid, b)
    ts = (0.0, 0.5, 1.0)
    state = seed & _U64
    total = 27 + n
    for idx in range(total):
        if idx < 27:
            u = pts[idx // 9]
            v = pts[(idx // 3) % 3]
            t = ts[idx % 3]
        else:
            state, du = splitmix64_next(state)
            state, dv = splitmix64_next(state)
            state, dt = splitmix64_next(state)
            u = a + du * (b - a)
            v = a + dv * (b - a)
            t = dt
        gu = g(u)
        if kind == KIND_LOG and gu <= 0.0:
            return 3, kind, u, gu
        if kind == KIND_S and gu < 0.0:
            return 3, kind, u, gu
        gv = g(v)
        if kind == KIND_LOG and gv <= 0.0:
            return 3, kind, v, gv
        if kind == KIND_S and gv < 0.0:
            return 3, kind, v, gv
        if kind == KIND_S:
            xpt = t * u + (1.0 - t) * v
        else:
            xpt = u + t * eta * (v - u)
        gx = g(xpt)
        if kind == KIND_LOG and gx <= 0.0:
            return 3, kind, xpt, gx
        if kind == KIND_S and gx < 0.0:
            return 3, kind, xpt, gx
        if kind == KIND_PHI:
            rhs = (1.0 - t) * gu + t * gv
        elif kind == KIND_LOG:
            rhs = gu ** (1.0 - t) * gv**t
        elif kind == KIND_QUASI:
            rhs = gu if gu >= gv else gv
        else:
            rhs = t**s * gu + (1.0 - t) ** s * gv
        if gx > rhs + tol:
            return 1, idx, u, v, t, gx, rhs
    return 0, total


class _ProgramTarget:
    """Adapter used by the pure classify_run; raises via error sentinel."""

    __slots__ = ("ops", "args", "mode", "expo", "err", "x")

    def __init__(self, ops, args, mode, expo):
        self.ops = ops
        self.args = args
        self.mode = mode
        self.expo = expo
        self.err = ERR_OK
        self.x = 0.0

    def __call__(self, x):
        err, val = _target_value(self.ops, self.args, self.mode, self.expo, x)
        if err:
            self.err = err
            self.x = x
            raise _EvalSignal()
        return val


class _EvalSignal(Exception):
    pass


def classify_run(ops, args, mode, expo, kind, s, a, b, eta, tol, n, seed):
    """Program-target twin of `_core.classify_run`.

    Adds the result form (2, errcode, x) for evaluation failures.
    """
    target = _ProgramTarget(ops, args, mode, expo)
    try:
        return classify_callable(target, kind, s, a, b, eta, tol, n, seed)
    except _EvalSignal:
        return 2, target.err, target.x
