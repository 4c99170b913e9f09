"""Flat stack programs compiled from expression trees.

Both backends execute the same opcode stream with the same operation order,
so values, jets, and classifier verdicts agree bit for bit. The opcode
numbering and the error codes below are mirrored literally in `_core.pyx`;
`tests/test_backends.py` checks the two tables against each other.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field
from functools import lru_cache

from . import expr as ex

OP_CONST = 0  # push args[i]
OP_X = 1  # push the evaluation point
OP_ADD = 2
OP_SUB = 3
OP_MUL = 4
OP_DIV = 5
OP_NEG = 6
OP_POW_INT = 7  # integer exponent stored in args[i]
OP_POW = 8  # general power, evaluated as exp(w*log(u)), u > 0
OP_SIN = 9
OP_COS = 10
OP_EXP = 11
OP_LOG = 12
OP_SQRT = 13
OP_ABS = 14

OPCODE_NAMES = (
    "const", "x", "add", "sub", "mul", "div", "neg", "pow_int", "pow",
    "sin", "cos", "exp", "log", "sqrt", "abs",
)

# Evaluation error codes (0 means success).
ERR_OK = 0
ERR_LOG = 1  # log of a non-positive value
ERR_SQRT_NEG = 2  # sqrt of a negative value
ERR_POW_ZERO_NEG = 3  # 0 raised to a negative power
ERR_POW_BASE = 4  # non-positive base with a non-integer exponent
ERR_DIV_ZERO = 5
ERR_ABS_ZERO = 6  # abs differentiated at 0
ERR_SQRT_ZERO = 7  # sqrt differentiated at 0
ERR_NONFINITE = 8  # overflow or NaN in the result

# Stack slots preallocated by the compiled backend; compile() enforces it.
STACK_CAP = 128

# Integer exponents above this go through the general pow path.
_MAX_INT_EXPONENT = 2**31 - 1

_CALL_OPS = {
    "sin": OP_SIN,
    "cos": OP_COS,
    "exp": OP_EXP,
    "log": OP_LOG,
    "sqrt": OP_SQRT,
    "abs": OP_ABS,
}


@dataclass(frozen=True, eq=False)
class Program:
    """Postorder opcode stream for one expression."""

    ops: array
    args: array
    depth: int
    source: str = field(default="", compare=False)

    def __len__(self):
        return len(self.ops)


def _int_exponent(node):
    """Integer value of a constant exponent, or None.

    Accepts a bare constant or a unary-minus constant so that `x^-2`
    still evaluates by repeated multiplication.
    """
    sign = 1
    if isinstance(node, ex.Unary):
        sign = -1
        node = node.child
    if not isinstance(node, ex.Constant):
        return None
    value = node.value
    if value != value or value in (float("inf"), float("-inf")):
        return None
    if value != int(value) or abs(value) > _MAX_INT_EXPONENT:
        return None
    return sign * int(value)


def compile_program(ast: ex.Node) -> Program:
    ops = array("i")
    args = array("d")

    def emit(op, arg=0.0):
        ops.append(op)
        args.append(arg)

    def walk(node):
        if isinstance(node, ex.Constant):
            emit(OP_CONST, node.value)
            return 1
        if isinstance(node, ex.Variable):
            emit(OP_X)
            return 1
        if isinstance(node, ex.Unary):
            d = walk(node.child)
            emit(OP_NEG)
            return d
        if isinstance(node, ex.Call):
            d = walk(node.child)
            emit(_CALL_OPS[node.func])
            return d
        if isinstance(node, ex.Binary):
            if node.op == "^":
                k = _int_exponent(node.right)
                if k is not None:
                    d = walk(node.left)
                    emit(OP_POW_INT, float(k))
                    return d
                dl = walk(node.left)
                dr = walk(node.right)
                emit(OP_POW)
                return max(dl, dr + 1)
            dl = walk(node.left)
            dr = walk(node.right)
            emit({"+": OP_ADD, "-": OP_SUB, "*": OP_MUL, "/": OP_DIV}[node.op])
            return max(dl, dr + 1)
        raise TypeError(f"not an expression node: {node!r}")

    depth = walk(ast)
    if depth > STACK_CAP:
        raise ValueError(f"expression too deeply nested (stack {depth} > {STACK_CAP})")
    return Program(ops=ops, args=args, depth=depth, source=ex.to_source(ast))


@lru_cache(maxsize=512)
def compile_cached(ast: ex.Node) -> Program:
    return compile_program(ast)
