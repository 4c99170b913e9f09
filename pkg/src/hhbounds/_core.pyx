# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation backend.

Twin of `_pure.py`: every arithmetic expression is copied verbatim so the two
backends return bit-identical values (same libm). Opcode and error numbers
are literals here; `opcode_table()` / `error_table()` let tests check them
against `program.py`.
"""

from libc.math cimport cos, exp, fabs, isfinite, log, pow, sin, sqrt

# --- mirrored from program.py ------------------------------------------------
DEF OP_CONST = 0
DEF OP_X = 1
DEF OP_ADD = 2
DEF OP_SUB = 3
DEF OP_MUL = 4
DEF OP_DIV = 5
DEF OP_NEG = 6
DEF OP_POW_INT = 7
DEF OP_POW = 8
DEF OP_SIN = 9
DEF OP_COS = 10
DEF OP_EXP = 11
DEF OP_LOG = 12
DEF OP_SQRT = 13
DEF OP_ABS = 14

DEF ERR_OK = 0
DEF ERR_LOG = 1
DEF ERR_SQRT_NEG = 2
DEF ERR_POW_ZERO_NEG = 3
DEF ERR_POW_BASE = 4
DEF ERR_DIV_ZERO = 5
DEF ERR_ABS_ZERO = 6
DEF ERR_SQRT_ZERO = 7
DEF ERR_NONFINITE = 8

DEF STACK_CAP = 128

DEF MODE_VALUE = 0
DEF MODE_ABS_D2 = 1

DEF KIND_PHI = 0
DEF KIND_LOG = 1
DEF KIND_QUASI = 2
DEF KIND_S = 3

DEF DOUBLE_UNIT = 1.0 / 9007199254740992.0  # 2^-53


def opcode_table():
    return {
        "const": OP_CONST, "x": OP_X, "add": OP_ADD, "sub": OP_SUB,
        "mul": OP_MUL, "div": OP_DIV, "neg": OP_NEG, "pow_int": OP_POW_INT,
        "pow": OP_POW, "sin": OP_SIN, "cos": OP_COS, "exp": OP_EXP,
        "log": OP_LOG, "sqrt": OP_SQRT, "abs": OP_ABS,
    }


def error_table():
    return {
        "ok": ERR_OK, "log": ERR_LOG, "sqrt_neg": ERR_SQRT_NEG,
        "pow_zero_neg": ERR_POW_ZERO_NEG, "pow_base": ERR_POW_BASE,
        "div_zero": ERR_DIV_ZERO, "abs_zero": ERR_ABS_ZERO,
        "sqrt_zero": ERR_SQRT_ZERO, "nonfinite": ERR_NONFINITE,
    }


cdef int _eval_value(const int[:] ops, const double[:] args, double x,
                     double* out) noexcept nogil:
    cdef double stack[STACK_CAP]
    cdef int sp = 0
    cdef Py_ssize_t i, n = ops.shape[0]
    cdef int op
    cdef long long k, e
    cdef double base, acc, b, w, u, v
    for i in range(n):
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
                return ERR_DIV_ZERO
            stack[sp - 1] = stack[sp - 1] / stack[sp]
        elif op == OP_NEG:
            stack[sp - 1] = -stack[sp - 1]
        elif op == OP_POW_INT:
            k = <long long> args[i]
            base = stack[sp - 1]
            if k < 0:
                if base == 0.0:
                    return ERR_POW_ZERO_NEG
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
                    return ERR_NONFINITE
                acc = 1.0 / acc
            stack[sp - 1] = acc
        elif op == OP_POW:
            sp -= 1
            w = stack[sp]
            u = stack[sp - 1]
            if u > 0.0:
                stack[sp - 1] = exp(w * log(u))
            elif u == 0.0:
                if w > 0.0:
                    stack[sp - 1] = 0.0
                elif w == 0.0:
                    stack[sp - 1] = 1.0
                else:
                    return ERR_POW_ZERO_NEG
            else:
                return ERR_POW_BASE
        elif op == OP_SIN:
            stack[sp - 1] = sin(stack[sp - 1])
        elif op == OP_COS:
            stack[sp - 1] = cos(stack[sp - 1])
        elif op == OP_EXP:
            stack[sp - 1] = exp(stack[sp - 1])
        elif op == OP_LOG:
            if stack[sp - 1] <= 0.0:
                return ERR_LOG
            stack[sp - 1] = log(stack[sp - 1])
        elif op == OP_SQRT:
            if stack[sp - 1] < 0.0:
                return ERR_SQRT_NEG
            stack[sp - 1] = sqrt(stack[sp - 1])
        else:  # OP_ABS
            stack[sp - 1] = fabs(stack[sp - 1])
    v = stack[0]
    if not isfinite(v):
        return ERR_NONFINITE
    out[0] = v
    return ERR_OK


cdef int _eval_jet(const int[:] ops, const double[:] args, double x,
                   double* outv, double* out1, double* out2) noexcept nogil:
    cdef double sv[STACK_CAP]
    cdef double s1[STACK_CAP]
    cdef double s2[STACK_CAP]
    cdef int sp = 0
    cdef Py_ssize_t i, n = ops.shape[0]
    cdef int op
    cdef long long k, e
    cdef double av, a1, a2, bv, b1, b2, q, q1, q2
    cdef double accv, acc1, acc2, nv, n1, n2
    cdef double wv, w1, w2, uv, u1, u2, lv, t, l1, l2, mv, m1, m2, ev
    cdef double s, c, r, h, denom, v, d1, d2
    for i in range(n):
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
            av = sv[sp - 1]; a1 = s1[sp - 1]; a2 = s2[sp - 1]
            bv = sv[sp]; b1 = s1[sp]; b2 = s2[sp]
            sv[sp - 1] = av * bv
            s1[sp - 1] = av * b1 + a1 * bv
            s2[sp - 1] = av * b2 + 2.0 * a1 * b1 + a2 * bv
        elif op == OP_DIV:
            sp -= 1
            av = sv[sp - 1]; a1 = s1[sp - 1]; a2 = s2[sp - 1]
            bv = sv[sp]; b1 = s1[sp]; b2 = s2[sp]
            if bv == 0.0:
                return ERR_DIV_ZERO
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
            k = <long long> args[i]
            av = sv[sp - 1]; a1 = s1[sp - 1]; a2 = s2[sp - 1]
            if k < 0 and av == 0.0:
                return ERR_POW_ZERO_NEG
            e = -k if k < 0 else k
            accv = 1.0; acc1 = 0.0; acc2 = 0.0
            bv = av; b1 = a1; b2 = a2
            while e:
                if e & 1:
                    nv = accv * bv
                    n1 = accv * b1 + acc1 * bv
                    n2 = accv * b2 + 2.0 * acc1 * b1 + acc2 * bv
                    accv = nv; acc1 = n1; acc2 = n2
                e >>= 1
                if e:
                    nv = bv * bv
                    n1 = bv * b1 + b1 * bv
                    n2 = bv * b2 + 2.0 * b1 * b1 + b2 * bv
                    bv = nv; b1 = n1; b2 = n2
            if k < 0:
                if accv == 0.0:  # |base|^|k| underflowed
                    return ERR_NONFINITE
                q = 1.0 / accv
                q1 = (0.0 - q * acc1) / accv
                q2 = (0.0 - 2.0 * q1 * acc1 - q * acc2) / accv
                accv = q; acc1 = q1; acc2 = q2
            sv[sp - 1] = accv
            s1[sp - 1] = acc1
            s2[sp - 1] = acc2
        elif op == OP_POW:
            sp -= 1
            wv = sv[sp]; w1 = s1[sp]; w2 = s2[sp]
            uv = sv[sp - 1]; u1 = s1[sp - 1]; u2 = s2[sp - 1]
            if uv <= 0.0:
                return ERR_POW_ZERO_NEG if uv == 0.0 else ERR_POW_BASE
            lv = log(uv)
            t = u1 / uv
            l1 = t
            l2 = u2 / uv - t * t
            mv = wv * lv
            m1 = wv * l1 + w1 * lv
            m2 = wv * l2 + 2.0 * w1 * l1 + w2 * lv
            ev = exp(mv)
            sv[sp - 1] = ev
            s1[sp - 1] = ev * m1
            s2[sp - 1] = ev * m1 * m1 + ev * m2
        elif op == OP_SIN:
            av = sv[sp - 1]; a1 = s1[sp - 1]; a2 = s2[sp - 1]
            s = sin(av)
            c = cos(av)
            sv[sp - 1] = s
            s1[sp - 1] = c * a1
            s2[sp - 1] = -s * a1 * a1 + c * a2
        elif op == OP_COS:
            av = sv[sp - 1]; a1 = s1[sp - 1]; a2 = s2[sp - 1]
            s = sin(av)
            c = cos(av)
            sv[sp - 1] = c
            s1[sp - 1] = -s * a1
            s2[sp - 1] = -c * a1 * a1 - s * a2
        elif op == OP_EXP:
            av = sv[sp - 1]; a1 = s1[sp - 1]; a2 = s2[sp - 1]
            ev = exp(av)
            sv[sp - 1] = ev
            s1[sp - 1] = ev * a1
            s2[sp - 1] = ev * a1 * a1 + ev * a2
        elif op == OP_LOG:
            av = sv[sp - 1]; a1 = s1[sp - 1]; a2 = s2[sp - 1]
            if av <= 0.0:
                return ERR_LOG
            t = a1 / av
            sv[sp - 1] = log(av)
            s1[sp - 1] = t
            s2[sp - 1] = a2 / av - t * t
        elif op == OP_SQRT:
            av = sv[sp - 1]; a1 = s1[sp - 1]; a2 = s2[sp - 1]
            if av < 0.0:
                return ERR_SQRT_NEG
            if av == 0.0:
                return ERR_SQRT_ZERO
            r = sqrt(av)
            denom = r * av
            if denom == 0.0:  # subnormal operand
                return ERR_NONFINITE
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
                return ERR_ABS_ZERO
    v = sv[0]; d1 = s1[0]; d2 = s2[0]
    if not (isfinite(v) and isfinite(d1) and isfinite(d2)):
        return ERR_NONFINITE
    outv[0] = v
    out1[0] = d1
    out2[0] = d2
    return ERR_OK


def eval_value(const int[:] ops, const double[:] args, double x):
    cdef double out = 0.0
    cdef int err = _eval_value(ops, args, x, &out)
    if err:
        return err, 0.0
    return ERR_OK, out


def eval_jet(const int[:] ops, const double[:] args, double x):
    cdef double v = 0.0, d1 = 0.0, d2 = 0.0
    cdef int err = _eval_jet(ops, args, x, &v, &d1, &d2)
    if err:
        return err, 0.0, 0.0, 0.0
    return ERR_OK, v, d1, d2


cdef unsigned long long _splitmix_next(unsigned long long* state,
                                       double* out) noexcept nogil:
    cdef unsigned long long z
    state[0] = state[0] + <unsigned long long> 0x9E3779B97F4A7C15
    z = state[0]
    z = (z ^ (z >> 30)) * <unsigned long long> 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <unsigned long long> 0x94D049BB133111EB
    z = z ^ (z >> 31)
    out[0] = <double> (z >> 11) * DOUBLE_UNIT
    return state[0]


cdef int _target_value(const int[:] ops, const double[:] args, int mode,
                       double expo, double x, double* out) noexcept nogil:
    cdef double val = 0.0, v = 0.0, d1 = 0.0, d2 = 0.0
    cdef int err
    if mode == MODE_VALUE:
        err = _eval_value(ops, args, x, &val)
        if err:
            return err
    else:
        err = _eval_jet(ops, args, x, &v, &d1, &d2)
        if err:
            return err
        val = fabs(d2)
    if expo != 1.0:
        val = pow(val, expo)
        if not isfinite(val):
            return ERR_NONFINITE
    out[0] = val
    return ERR_OK


def classify_run(const int[:] ops, const double[:] args, int mode, double expo,
                 int kind, double s, double a, double b, double eta,
                 double tol, long long n, unsigned long long seed):
    """Sampling loop over 27 corner triples + n splitmix64 triples.

    Result tuples match `_pure.classify_run`.
    """
    cdef double mid = a + 0.5 * (b - a)
    cdef double pts[3]
    cdef double ts[3]
    pts[0] = a; pts[1] = mid; pts[2] = b
    ts[0] = 0.0; ts[1] = 0.5; ts[2] = 1.0
    cdef unsigned long long state = seed
    cdef long long idx, total = 27 + n
    cdef double u, v, t, du, dv, dt, gu, gv, gx, xpt, rhs
    cdef int err
    for idx in range(total):
        if idx < 27:
            u = pts[idx // 9]
            v = pts[(idx // 3) % 3]
            t = ts[idx % 3]
        else:
            _splitmix_next(&state, &du)
            _splitmix_next(&state, &dv)
            _splitmix_next(&state, &dt)
            u = a + du * (b - a)
            v = a + dv * (b - a)
            t = dt
        err = _target_value(ops, args, mode, expo, u, &gu)
        if err:
            return 2, err, u
        if kind == KIND_LOG and gu <= 0.0:
            return 3, kind, u, gu
        if kind == KIND_S and gu < 0.0:
            return 3, kind, u, gu
        err = _target_value(ops, args, mode, expo, v, &gv)
        if err:
            return 2, err, v
        if kind == KIND_LOG and gv <= 0.0:
            return 3, kind, v, gv
        if kind == KIND_S and gv < 0.0:
            return 3, kind, v, gv
        if kind == KIND_S:
            xpt = t * u + (1.0 - t) * v
        else:
            xpt = u + t * eta * (v - u)
        err = _target_value(ops, args, mode, expo, xpt, &gx)
        if err:
            return 2, err, xpt
        if kind == KIND_LOG and gx <= 0.0:
            return 3, kind, xpt, gx
        if kind == KIND_S and gx < 0.0:
            return 3, kind, xpt, gx
        if kind == KIND_PHI:
            rhs = (1.0 - t) * gu + t * gv
        elif kind == KIND_LOG:
            rhs = pow(gu, 1.0 - t) * pow(gv, t)
        elif kind == KIND_QUASI:
            rhs = gu if gu >= gv else gv
        else:
            rhs = pow(t, s) * gu + pow(1.0 - t, s) * gv
        if gx > rhs + tol:
            return 1, idx, u, v, t, gx, rhs
    return 0, total
