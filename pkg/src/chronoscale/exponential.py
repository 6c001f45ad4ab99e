"""Generalized nabla/delta exponentials between two instants of a scale.

The nabla exponential with parameter s, referenced at instant j, is the
running product of (1 - s*g)^{-1} over the steps g walked forward from j
(and of (1 - s*g) walked backward); the delta exponential mirrors it with
(1 + s*g).  These products are the eigenfunctions of the corresponding
difference quotients: one forward factor times the backward step identity
gives (e_n - e_{n-1}) / nu_n = s * e_n exactly.

Products over many steps under- or overflow doubles, so evaluations
spanning more than ``LOG_SPACE_THRESHOLD`` factors switch to summing
per-factor principal-branch logarithms; each factor is evaluated
independently, so no branch unwinding is ever needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PoleHit
from .timescale import DELTA, NABLA, TimeScale

#: Above this many product factors, evaluate in log space.
LOG_SPACE_THRESHOLD = 64

#: A factor counts as a pole when |1 -+ s*g| < POLE_TOL * (1 + |s*g|).
POLE_TOL = 1e-14


@dataclass(frozen=True)
class HilgerGeometry:
    """Smallest and largest step size of a window.

    The circles |1 - s*h| = 1 for h in [h_min, h_max] govern boundedness of
    the nabla exponential in the complex parameter plane.
    """

    h_min: float
    h_max: float

    def __post_init__(self) -> None:
        if not 0.0 < self.h_min <= self.h_max:
            raise ValueError(f"need 0 < h_min <= h_max, got {self.h_min}, {self.h_max}")


def hilger_geometry(ts: TimeScale) -> HilgerGeometry:
    return HilgerGeometry(float(np.min(ts.steps)), float(np.max(ts.steps)))


def _kind_sign(kind: str) -> float:
    if kind == NABLA:
        return -1.0
    if kind == DELTA:
        return 1.0
    raise ValueError(f"kind must be 'nabla' or 'delta', got {kind!r}")


def _check_poles(factors: np.ndarray, s_times_g: np.ndarray, kind: str, s: complex) -> None:
    bad = np.abs(factors) < POLE_TOL * (1.0 + np.abs(s_times_g))
    if np.any(bad):
        raise PoleHit(
            f"{kind} exponential factor vanishes for s={s!r} "
            f"(s matches a reciprocal step size)"
        )


def exp_profile(
    ts: TimeScale,
    ref: int,
    s: complex,
    kind: str,
    lo: int | None = None,
    hi: int | None = None,
) -> np.ndarray:
    """Exponential e_kind(t_i, t_ref; s) for every index i in [lo, hi].

    Only the factors actually spanned by [lo, hi] are screened for poles,
    so a pole elsewhere in the window does not poison the evaluation.
    Returns a complex array of length hi - lo + 1.
    """
    sign = _kind_sign(kind)
    lo = 0 if lo is None else lo
    hi = len(ts) - 1 if hi is None else hi
    ts.check_index(lo)
    ts.check_index(hi)
    ts.check_index(ref)
    if lo > hi:
        raise ValueError(f"need lo <= hi, got [{lo}, {hi}]")
    span_lo = min(lo, ref)
    span_hi = max(hi, ref)
    g = ts.steps[span_lo:span_hi]
    sg = s * g
    factors = 1.0 + sign * sg

    # Inverse factors: forward steps for nabla, backward steps for delta.
    if kind == NABLA and hi > ref:
        fwd = factors[ref - span_lo:]
        _check_poles(fwd, sg[ref - span_lo:], kind, s)
    if kind == DELTA and lo < ref:
        back = factors[: ref - span_lo]
        _check_poles(back, sg[: ref - span_lo], kind, s)

    # exponent of each step factor when moving from ref to larger indices
    fwd_exp = -1.0 if kind == NABLA else 1.0
    n_span = span_hi - span_lo
    out = np.empty(span_hi - span_lo + 1, dtype=complex)
    ref_pos = ref - span_lo
    if n_span > LOG_SPACE_THRESHOLD:
        logs = np.log(factors.astype(complex))
        acc = np.concatenate(([0.0 + 0.0j], np.cumsum(logs)))
        acc = acc - acc[ref_pos]
        out = np.exp(fwd_exp * acc)
    else:
        out[ref_pos] = 1.0
        prod = 1.0 + 0.0j
        for i in range(ref_pos + 1, n_span + 1):
            prod = prod * factors[i - 1] if fwd_exp > 0 else prod / factors[i - 1]
            out[i] = prod
        prod = 1.0 + 0.0j
        for i in range(ref_pos - 1, -1, -1):
            prod = prod / factors[i] if fwd_exp > 0 else prod * factors[i]
            out[i] = prod
    return out[lo - span_lo: hi - span_lo + 1]


def exp(ts: TimeScale, at: int, ref: int, s: complex, kind: str = NABLA) -> complex:
    """Generalized exponential between two window indices.

    ``exp(ts, i, j, s, "nabla")`` is 1 for i == j, the product of
    (1 - s*g)^{-1} over the steps from j up to i for i > j, and the plain
    product of (1 - s*g) for i < j.  The delta kind mirrors with (1 + s*g).
    """
    return complex(exp_profile(ts, ref, s, kind, lo=at, hi=at)[0])


def exp_nodes(ts: TimeScale, at: int, ref: int, s_values: np.ndarray, kind: str) -> np.ndarray:
    """Vectorized ``exp`` over an array of parameter values (one index pair)."""
    sign = _kind_sign(kind)
    if at == ref:
        return np.ones(len(s_values), dtype=complex)
    lo, hi = (ref, at) if at > ref else (at, ref)
    g = ts.steps[lo:hi]
    factors = 1.0 + sign * np.multiply.outer(np.asarray(s_values), g)
    inverse = (kind == NABLA) == (at > ref)
    if inverse:
        smallest = np.min(np.abs(factors), axis=1)
        if np.any(smallest < POLE_TOL * (1.0 + np.max(np.abs(s_values)) * np.max(g))):
            raise PoleHit(f"{kind} exponential factor vanishes on the node set")
    if g.size > LOG_SPACE_THRESHOLD:
        acc = np.sum(np.log(factors.astype(complex)), axis=1)
        return np.exp(-acc) if inverse else np.exp(acc)
    prod = np.prod(factors.astype(complex), axis=1)
    return 1.0 / prod if inverse else prod


def hilger_classify(geom: HilgerGeometry, s: complex) -> str:
    """Classify s against the inner/outer Hilger circles (strict inequalities)."""
    if abs(1.0 - s * geom.h_min) < 1.0:
        return "inside_inner"
    if abs(1.0 - s * geom.h_max) > 1.0:
        return "outside_outer"
    return "intermediate"


def scale_change_check(
    ts: TimeScale,
    a: float,
    s: complex,
    at: int,
    ref: int | None = None,
    kind: str = NABLA,
) -> tuple[complex, complex]:
    """Evaluate both sides of the scale-change identity for testing.

    Returns (exponential on the dilated scale a*T with parameter s,
    exponential on T with parameter a*s); the two must agree.
    """
    if not a > 0:
        raise ValueError(f"scale factor must be positive, got {a!r}")
    ref = ts.t0_index if ref is None else ref
    scaled = TimeScale(ts.instants * float(a), ts.t0_index)
    left = exp(scaled, at, ref, s, kind)
    right = exp(ts, at, ref, a * s, kind)
    return left, right
