"""Second-order forward-mode differentiation over expression trees.

A Jet2 carries (f, f', f'') propagated together through the program by
truncated Taylor arithmetic, e.g. (u*w).d2 = u.d2*w.v + 2*u.d1*w.d1 + u.v*w.d2.
The seed at the evaluation point is (x, 1, 0); constants lift to (c, 0, 0).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import backend
from .expr import Node
from .program import compile_cached


@dataclass(frozen=True)
class Jet2:
    v: float
    d1: float
    d2: float


def eval_jet2(ast: Node, x: float) -> Jet2:
    """Evaluate (f(x), f'(x), f''(x)) in one pass.

    Raises DomainError on domain violations of any subexpression and
    NonDifferentiableError when abs (or sqrt) is differentiated at 0.
    """
    v, d1, d2 = backend.eval_jet(compile_cached(ast), x)
    return Jet2(v, d1, d2)


def second_derivative(ast: Node, x: float) -> float:
    return backend.eval_jet(compile_cached(ast), x)[2]
