"""Backend selection: compiled core when available, pure Python otherwise.

Set HHBOUNDS_BACKEND=pure or HHBOUNDS_BACKEND=compiled to force a choice;
the default tries the compiled extension and falls back silently. Both
backends implement identical semantics (see `_pure.py`), so the choice
affects speed only.
"""

from __future__ import annotations

import os

from . import _pure
from .errors import DomainError, NonDifferentiableError
from .program import (
    ERR_ABS_ZERO,
    ERR_DIV_ZERO,
    ERR_LOG,
    ERR_NONFINITE,
    ERR_POW_BASE,
    ERR_POW_ZERO_NEG,
    ERR_SQRT_NEG,
    ERR_SQRT_ZERO,
    Program,
)

_U64 = (1 << 64) - 1


def _load():
    requested = os.environ.get("HHBOUNDS_BACKEND", "auto").strip().lower()
    if requested in ("", "auto"):
        try:
            from . import _core

            return _core, "compiled"
        except ImportError:
            return _pure, "pure"
    if requested == "pure":
        return _pure, "pure"
    if requested == "compiled":
        from . import _core  # ImportError here means the extension was not built

        return _core, "compiled"
    raise ValueError(f"HHBOUNDS_BACKEND must be auto, pure or compiled, got {requested!r}")


_impl, BACKEND = _load()

_MESSAGES = {
    ERR_LOG: (DomainError, "log of a non-positive value"),
    ERR_SQRT_NEG: (DomainError, "sqrt of a negative value"),
    ERR_POW_ZERO_NEG: (DomainError, "0 raised to a negative power"),
    ERR_POW_BASE: (DomainError, "power with a negative base needs an integer exponent"),
    ERR_DIV_ZERO: (DomainError, "division by zero"),
    ERR_ABS_ZERO: (NonDifferentiableError, "abs is not differentiable at 0"),
    ERR_SQRT_ZERO: (NonDifferentiableError, "sqrt is not differentiable at 0"),
    ERR_NONFINITE: (DomainError, "evaluation overflowed to a non-finite value"),
}


def raise_eval_error(code: int, x: float):
    cls, message = _MESSAGES[code]
    raise cls(f"{message} (at x = {x!r})")


def eval_value(program: Program, x: float) -> float:
    err, value = _impl.eval_value(program.ops, program.args, x)
    if err:
        raise_eval_error(err, x)
    return value


def eval_jet(program: Program, x: float):
    """Returns the (value, first, second derivative) triple at x."""
    err, v, d1, d2 = _impl.eval_jet(program.ops, program.args, x)
    if err:
        raise_eval_error(err, x)
    return v, d1, d2


def classify_run(program: Program, mode: int, expo: float, kind: int, s: float,
                 a: float, b: float, eta: float, tol: float, n: int, seed: int):
    """Raw falsification loop over a compiled target; see `_pure.classify_run`."""
    return _impl.classify_run(
        program.ops, program.args, mode, expo, kind, s, a, b, eta, tol, n,
        seed & _U64,
    )
