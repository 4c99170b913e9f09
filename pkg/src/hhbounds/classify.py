"""Sampling falsifiers for the path-convexity hypothesis classes.

A falsifier can refute a universally quantified inequality, never prove it:
NotFalsified reports the sample count and is no certificate. Pairs (u, v)
are drawn from the full [a, b] of the interval while test points follow the
contracted path u + t*eta*(v-u), matching how the bound derivations consume
the hypothesis (endpoint magnitudes are taken at a and the original b).

Verdicts are reproducible bit for bit for a fixed seed, on either backend:
samples come from a splitmix64 stream, corners first, and the first
violation in sample order wins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

from . import _pure, backend
from .errors import DomainError
from .program import Program

DEFAULT_SAMPLES = 10_000
DEFAULT_SEED = 42
PREDICATE_TOL = 1e-9

KIND_PHI = _pure.KIND_PHI
KIND_LOG = _pure.KIND_LOG
KIND_QUASI = _pure.KIND_QUASI
KIND_S = _pure.KIND_S

_MODES = {"value": _pure.MODE_VALUE, "abs_d2": _pure.MODE_ABS_D2}

_KIND_PRECONDITION = {
    KIND_LOG: "log-phi-convexity needs strictly positive sample values",
    KIND_S: "s-convexity needs nonnegative sample values",
}


@dataclass(frozen=True)
class PathInterval:
    """Base point a, endpoint b, and the real contraction factor eta.

    eta stands in for the paper-style complex rotation of the path; eta = 1
    recovers the classical interval [a, b]. The derived endpoint is
    a + eta*(b - a).
    """

    a: float
    b: float
    eta: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise ValueError(f"need finite a < b, got a={self.a!r}, b={self.b!r}")
        if not (0.0 < self.eta <= 1.0):
            raise ValueError(f"eta must lie in (0, 1], got {self.eta!r}")

    @property
    def end(self) -> float:
        return self.a + self.eta * (self.b - self.a)

    @property
    def span(self) -> float:
        return self.eta * (self.b - self.a)


@dataclass(frozen=True)
class Witness:
    u: float
    v: float
    t: float
    lhs: float
    rhs: float
    gap: float


@dataclass(frozen=True)
class Verdict:
    samples: int
    witness: Witness | None = None

    @property
    def falsified(self) -> bool:
        return self.witness is not None


@dataclass(frozen=True)
class CompiledTarget:
    """Target function given as a compiled program plus a pointwise transform.

    mode "value" evaluates the expression itself, "abs_d2" evaluates
    |f''|; exponent r maps the result through y -> y**r. Classifiers run
    compiled targets through the fast backend loop; calling it directly
    gives the same values one point at a time.
    """

    program: Program
    mode: str = "value"
    exponent: float = 1.0

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {sorted(_MODES)}, got {self.mode!r}")

    def __call__(self, x: float) -> float:
        if self.mode == "value":
            val = backend.eval_value(self.program, x)
        else:
            val = abs(backend.eval_jet(self.program, x)[2])
        if self.exponent != 1.0:
            val = val**self.exponent
        return val


Target = Union[CompiledTarget, Callable[[float], float]]


def iter_triples(iv: PathInterval, n: int, seed: int):
    """The deterministic (u, v, t) sample sequence the falsifiers use."""
    mid = iv.a + 0.5 * (iv.b - iv.a)
    pts = (iv.a, mid, iv.b)
    ts = (0.0, 0.5, 1.0)
    for idx in range(27):
        yield pts[idx // 9], pts[(idx // 3) % 3], ts[idx % 3]
    state = seed & ((1 << 64) - 1)
    for _ in range(n):
        state, du = _pure.splitmix64_next(state)
        state, dv = _pure.splitmix64_next(state)
        state, dt = _pure.splitmix64_next(state)
        yield iv.a + du * (iv.b - iv.a), iv.a + dv * (iv.b - iv.a), dt


def _run(g: Target, iv: PathInterval, kind: int, s: float, n: int, seed: int,
         tol: float) -> Verdict:
    if n < 0:
        raise ValueError(f"sample count must be nonnegative, got {n!r}")
    if isinstance(g, CompiledTarget):
        result = backend.classify_run(
            g.program, _MODES[g.mode], g.exponent, kind, s,
            iv.a, iv.b, iv.eta, tol, n, seed,
        )
    else:
        result = _pure.classify_callable(g, kind, s, iv.a, iv.b, iv.eta, tol, n, seed)
    status = result[0]
    if status == 0:
        return Verdict(samples=result[1])
    if status == 1:
        _idx, u, v, t, lhs, rhs = result[1:]
        return Verdict(samples=_idx + 1, witness=Witness(u, v, t, lhs, rhs, lhs - rhs))
    if status == 2:
        _err, x = result[1:]
        backend.raise_eval_error(_err, x)
    # status 3: positivity/nonnegativity precondition violated at a sample
    _kind, x, gx = result[1:]
    raise DomainError(f"{_KIND_PRECONDITION[kind]}; got g({x!r}) = {gx!r}")


def falsify_phi_convex(g: Target, iv: PathInterval, n: int = DEFAULT_SAMPLES, *,
                       seed: int = DEFAULT_SEED, tol: float = PREDICATE_TOL) -> Verdict:
    """Search for a violation of g(u + t*eta*(v-u)) <= (1-t)g(u) + t g(v)."""
    return _run(g, iv, KIND_PHI, 0.0, n, seed, tol)


def falsify_log_phi_convex(g: Target, iv: PathInterval, n: int = DEFAULT_SAMPLES, *,
                           seed: int = DEFAULT_SEED, tol: float = PREDICATE_TOL) -> Verdict:
    """Search for a violation of g(u + t*eta*(v-u)) <= g(u)^(1-t) g(v)^t.

    Raises DomainError when a sampled value of g is not strictly positive.
    """
    return _run(g, iv, KIND_LOG, 0.0, n, seed, tol)


def falsify_quasi_phi_convex(g: Target, iv: PathInterval, n: int = DEFAULT_SAMPLES, *,
                             seed: int = DEFAULT_SEED, tol: float = PREDICATE_TOL) -> Verdict:
    """Search for a violation of g(u + t*eta*(v-u)) <= max(g(u), g(v))."""
    return _run(g, iv, KIND_QUASI, 0.0, n, seed, tol)


def falsify_s_convex(g: Target, iv: PathInterval, s: float,
                     n: int = DEFAULT_SAMPLES, *, seed: int = DEFAULT_SEED,
                     tol: float = PREDICATE_TOL) -> Verdict:
    """Search for a violation of g(tu + (1-t)v) <= t^s g(u) + (1-t)^s g(v).

    Classical-interval check: requires eta = 1 and nonnegative samples.
    """
    if iv.eta != 1.0:
        raise DomainError(f"s-convexity is a classical-interval check (eta = 1), got eta = {iv.eta!r}")
    if not 0.0 < s <= 1.0:
        raise DomainError(f"s must lie in (0, 1], got {s!r}")
    return _run(g, iv, KIND_S, s, n, seed, tol)


def replay(g: Target, kind: int, iv: PathInterval, w: Witness, s: float = 1.0) -> bool:
    """Re-evaluate a witness through its predicate; True if it still violates."""
    if kind == KIND_S:
        x = w.t * w.u + (1.0 - w.t) * w.v
        rhs = w.t**s * g(w.u) + (1.0 - w.t) ** s * g(w.v)
    else:
        x = w.u + w.t * iv.eta * (w.v - w.u)
        gu, gv = g(w.u), g(w.v)
        if kind == KIND_PHI:
            rhs = (1.0 - w.t) * gu + w.t * gv
        elif kind == KIND_LOG:
            rhs = gu ** (1.0 - w.t) * gv**w.t
        else:
            rhs = max(gu, gv)
    return g(x) > rhs
