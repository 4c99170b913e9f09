"""Adaptive Simpson quadrature with a Richardson error estimate.

This is the reference oracle for defects, identity residuals, and the
special-function cross-checks: simple, error-estimating, and exact on
cubics panel by panel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import NoConvergenceError

MAX_EVALUATIONS = 1_000_000
MAX_DEPTH = 60
WIDTH_FLOOR_FACTOR = 1e-14


@dataclass(frozen=True)
class QuadResult:
    value: float
    err_est: float
    evaluations: int


def integrate(g: Callable[[float], float], lo: float, hi: float, tol: float) -> QuadResult:
    """Integrate g over [lo, hi] to absolute tolerance tol.

    Raises NoConvergenceError when the evaluation cap (1e6) is hit or the
    final error estimate exceeds tol; evaluation errors from g propagate.
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    if lo > hi:
        raise ValueError(f"integration bounds out of order: {lo!r} > {hi!r}")
    if lo == hi:
        return QuadResult(0.0, 0.0, 0)

    count = 0

    def f(x):
        nonlocal count
        if count >= MAX_EVALUATIONS:
            raise NoConvergenceError(
                f"quadrature evaluation cap ({MAX_EVALUATIONS}) reached on [{lo}, {hi}]"
            )
        count += 1
        return g(x)

    width_floor = WIDTH_FLOOR_FACTOR * (hi - lo)

    def adapt(a, b, fa, fm, fb, whole, budget, depth):
        m = 0.5 * (a + b)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = f(lm)
        frm = f(rm)
        h12 = (b - a) / 12.0
        left = h12 * (fa + 4.0 * flm + fm)
        right = h12 * (fm + 4.0 * frm + fb)
        s2 = left + right
        delta = s2 - whole
        if abs(delta) <= 15.0 * budget or depth >= MAX_DEPTH or (b - a) <= width_floor:
            return s2 + delta / 15.0, abs(delta) / 15.0
        lv, le = adapt(a, m, fa, flm, fm, left, 0.5 * budget, depth + 1)
        rv, re = adapt(m, b, fm, frm, fb, right, 0.5 * budget, depth + 1)
        return lv + rv, le + re

    fa = f(lo)
    fm = f(0.5 * (lo + hi))
    fb = f(hi)
    whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb)
    value, err_est = adapt(lo, hi, fa, fm, fb, whole, tol, 0)
    if err_est > tol:
        raise NoConvergenceError(
            f"quadrature stalled at error estimate {err_est:.3e} > tol {tol:.3e}"
        )
    return QuadResult(value, err_est, count)
