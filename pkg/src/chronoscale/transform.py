"""Generalized Laplace transforms on a time scale and their inverses.

Direct transforms are exact finite series over a signal's support.  The
nabla series weights each sample by its *forward* step mu_n: with that
weight the circle quadrature of the printed inversion integral is an exact
inverse, because the residue of the collapsed kernel at the matching index
is 1/mu_n and every other index integrates to zero (see README for the
two-line residue computation).  The delta series keeps the backward weight
nu_n and mirrors the geometry to the negative real axis.

Rational transforms are inverted in closed form through a residue catalog:
a simple causal pole p contributes c_p * e_nabla(sigma(t_n), t0; p) for
t_n >= t0 (the one-step forward shift is what makes the direct series of
the kernel return exactly 1/(s-p)), an anticausal pole mirrors with a sign
flip left of t0, and higher multiplicities differentiate the kernel in p
via the logarithmic-derivative recurrence.

The numerical contour inverse is plain trapezoidal quadrature on a circle,
spectrally accurate for integrands analytic in an annulus around the path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .calculus import Signal, as_signal
from .errors import (
    BoundaryIndex,
    ContourInvalid,
    PoleHit,
    PoleOnScale,
    SupportTouchesBoundary,
)
from .exponential import LOG_SPACE_THRESHOLD, POLE_TOL
from .rational import ANTICAUSAL, CAUSAL, RationalTransform, partial_fractions, require_tagged
from .timescale import DELTA, NABLA, TimeScale

#: Fraction of the radius used as separation margin by the automatic
#: contour chooser; validation itself only enforces the 1e-6 invariant.
AUTO_MARGIN = 0.1

DEFAULT_NODES = 4096

#: Hard invariant: designated-outside poles must clear the path by this
#: fraction of the radius.
MIN_MARGIN = 1e-6


@dataclass(frozen=True)
class TransformValue:
    """A transform sample: the evaluation point and the series value."""

    s: complex
    value: complex

    def __post_init__(self) -> None:
        if not (np.isfinite(self.s.real) and np.isfinite(self.s.imag)
                and np.isfinite(self.value.real) and np.isfinite(self.value.imag)):
            raise ValueError("transform values must be finite")


@dataclass(frozen=True)
class Contour:
    """Circle in the complex plane for inverse-transform quadrature."""

    center: float
    radius: float
    nodes: int = DEFAULT_NODES

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ContourInvalid(f"radius must be positive, got {self.radius!r}")
        if self.nodes < 256 or (self.nodes & (self.nodes - 1)) != 0:
            raise ContourInvalid(
                f"node count must be a power of two >= 256, got {self.nodes}"
            )

    def points(self) -> tuple[np.ndarray, np.ndarray]:
        """Quadrature nodes s_j and the unit phases e^{i theta_j}."""
        theta = 2.0 * np.pi * np.arange(self.nodes) / self.nodes
        unit = np.exp(1j * theta)
        return self.center + self.radius * unit, unit


def _reciprocal_steps(ts: TimeScale, kind: str) -> np.ndarray:
    q = 1.0 / ts.steps
    return q if kind == NABLA else -q


def validate_contour(
    contour: Contour,
    ts: TimeScale,
    kind: str = NABLA,
    poles_outside: Sequence[complex] = (),
) -> None:
    """Check the separation invariants; raise ContourInvalid on violation."""
    q = _reciprocal_steps(ts, kind)
    inside = contour.radius - np.abs(q - contour.center)
    if np.any(inside <= MIN_MARGIN * contour.radius):
        worst = q[int(np.argmin(inside))]
        raise ContourInvalid(
            f"reciprocal step {worst:.6g} is not strictly inside the contour "
            f"(center {contour.center:.6g}, radius {contour.radius:.6g})"
        )
    for p in poles_outside:
        clearance = abs(complex(p) - contour.center) - contour.radius
        if clearance < MIN_MARGIN * contour.radius:
            raise ContourInvalid(
                f"pole {p!r} sits within {clearance:.3g} of the contour; "
                f"needs to stay outside"
            )


def auto_contour(
    ts: TimeScale,
    kind: str = NABLA,
    poles_outside: Sequence[complex] = (),
    nodes: int = DEFAULT_NODES,
    margin: float = AUTO_MARGIN,
    exclude_origin: bool = False,
) -> Contour:
    """Pick a circle separating the reciprocal steps from everything else.

    The center is scanned along the real axis (positive side for nabla,
    mirrored for delta) so that every reciprocal step sits at least
    ``margin * radius`` inside and every listed pole at least that far
    outside; ``exclude_origin`` additionally keeps the origin (and hence a
    branch cut on the negative real half-axis) outside the circle.
    """
    mirror = -1.0 if kind == DELTA else 1.0
    q = np.sort(_reciprocal_steps(ts, kind) * mirror)  # positive axis
    poles = np.asarray([complex(p) * mirror for p in poles_outside], dtype=complex)
    q_lo, q_hi = float(q[0]), float(q[-1])
    spread = max(q_hi - q_lo, 0.1 * q_hi, 1e-6)
    candidates = np.linspace(q_lo, q_hi + 2.5 * spread, 241)
    q_mag = max(abs(q_lo), abs(q_hi))
    best: tuple[tuple[float, float], float, float] | None = None  # (score, c, r)
    for c in candidates:
        r_min = float(np.max(np.abs(q - c))) / (1.0 - margin)
        r_max = math.inf
        if poles.size:
            r_max = float(np.min(np.abs(poles - c))) / (1.0 + margin)
        if exclude_origin:
            r_max = min(r_max, c / (1.0 + margin))
        if r_max < r_min or r_max <= 0.0:
            continue
        # a comfortably sized circle, not one hugging a tight reciprocal
        # cluster: poles concentric with the path are integrated exactly,
        # but a collapsing radius ruins the quadrature conditioning
        r_comfort = max(r_min, min(0.3 * q_mag, 0.8 * r_max))
        if math.isinf(r_max):
            radius = max(1.25 * r_min, r_comfort)
        else:
            radius = math.sqrt(r_comfort * r_max)
        # favour well-separated circles first, compact ones second
        score = (min(r_max / max(r_min, 1e-12 * q_mag), 3.0), -r_min)
        if best is None or score > best[0]:
            best = (score, float(c), radius)
    if best is None:
        raise ContourInvalid(
            "no circle on the real axis separates the reciprocal steps from "
            f"the designated outside points {list(poles_outside)!r}"
        )
    _, c, r = best
    contour = Contour(mirror * c, r, nodes)
    validate_contour(contour, ts, kind, poles_outside)
    return contour


def _profile_nodes(
    ts: TimeScale,
    ref: int,
    s_nodes: np.ndarray,
    kind: str,
    lo: int,
    hi: int,
) -> np.ndarray:
    """Matrix e_kind(t_i, t_ref; s_j) for i in [lo, hi], one column per node."""
    sign = -1.0 if kind == NABLA else 1.0
    span_lo, span_hi = min(lo, ref), max(hi, ref)
    g = ts.steps[span_lo:span_hi]
    nrows = span_hi - span_lo + 1
    factors = 1.0 + sign * np.multiply.outer(g, s_nodes)  # (steps, nodes)
    fwd_exp = -1.0 if kind == NABLA else 1.0
    if g.size > LOG_SPACE_THRESHOLD:
        logs = np.log(factors.astype(complex))
        acc = np.vstack([np.zeros((1, s_nodes.size), dtype=complex), np.cumsum(logs, axis=0)])
        acc = acc - acc[ref - span_lo]
        out = np.exp(fwd_exp * acc)
    else:
        out = np.empty((nrows, s_nodes.size), dtype=complex)
        ref_pos = ref - span_lo
        out[ref_pos] = 1.0
        for i in range(ref_pos + 1, nrows):
            step_factor = factors[i - 1].astype(complex)
            out[i] = out[i - 1] * step_factor if fwd_exp > 0 else out[i - 1] / step_factor
        for i in range(ref_pos - 1, -1, -1):
            step_factor = factors[i].astype(complex)
            out[i] = out[i + 1] / step_factor if fwd_exp > 0 else out[i + 1] * step_factor
    return out[lo - span_lo: hi - span_lo + 1]


def _series_weights(f: Signal, kind: str) -> tuple[np.ndarray, int, int]:
    """Support slice and series weights (forward steps for nabla)."""
    lo, hi = f.support
    n = len(f.scale)
    if kind == NABLA:
        if hi >= n - 1:
            raise SupportTouchesBoundary(
                "support reaches the right window edge; forward weight undefined"
            )
        return f.scale.steps[lo: hi + 1], lo, hi
    if lo <= 0:
        raise SupportTouchesBoundary(
            "support reaches the left window edge; backward weight undefined"
        )
    return f.scale.steps[lo - 1: hi], lo, hi


def direct_transform(f: Signal, s: complex, kind: str = NABLA) -> complex:
    """Exact finite transform series of a finite-support signal.

    nabla: sum of mu_n f(t_n) e_delta(t_n, t0; -s); delta: sum of
    nu_n f(t_n) e_nabla(t_n, t0; -s).
    """
    from .exponential import exp_profile

    weights, lo, hi = _series_weights(f, kind)
    dual = DELTA if kind == NABLA else NABLA
    profile = exp_profile(f.scale, f.scale.t0_index, -s, dual, lo=lo, hi=hi)
    return complex(np.sum(weights * f.values[lo: hi + 1] * profile))


def direct_transform_nodes(f: Signal, s_nodes: np.ndarray, kind: str = NABLA) -> np.ndarray:
    """Vectorized :func:`direct_transform` over an array of s values."""
    weights, lo, hi = _series_weights(f, kind)
    dual = DELTA if kind == NABLA else NABLA
    profile = _profile_nodes(f.scale, f.scale.t0_index, -np.asarray(s_nodes), dual, lo, hi)
    return (weights * f.values[lo: hi + 1]) @ profile


def impulse(ts: TimeScale) -> Signal:
    """The signal whose nabla transform is identically 1.

    A single spike at t0 with amplitude 1/mu(t0): the series then reduces
    to mu(t0) * (1/mu(t0)) * 1.
    """
    if ts.t0_index + 1 >= len(ts):
        raise BoundaryIndex("impulse needs the instant after t0 inside the window")
    values = np.zeros(len(ts), dtype=complex)
    values[ts.t0_index] = 1.0 / ts.mu(ts.t0_index)
    return Signal(ts, values, (ts.t0_index, ts.t0_index))


def unit_step(ts: TimeScale, flavor: str = CAUSAL) -> Signal:
    """Causal step (1 for t >= t0) or anticausal step (-1 for t < t0)."""
    n = len(ts)
    values = np.zeros(n, dtype=complex)
    if flavor == CAUSAL:
        values[ts.t0_index:] = 1.0
        return Signal(ts, values, (ts.t0_index, n - 1))
    if flavor == ANTICAUSAL:
        if ts.t0_index == 0:
            return Signal(ts, values, (ts.t0_index, ts.t0_index))
        values[: ts.t0_index] = -1.0
        return Signal(ts, values, (0, ts.t0_index - 1))
    raise ValueError(f"flavor must be causal or anticausal, got {flavor!r}")


def _check_pole_on_scale(ts: TimeScale, p: complex, step_slice: slice) -> None:
    g = ts.steps[step_slice]
    if g.size == 0:
        return
    factors = np.abs(1.0 - p * g)
    if np.any(factors < POLE_TOL * (1.0 + np.abs(p) * g)):
        raise PoleOnScale(
            f"pole {p!r} coincides with a reciprocal step of the scale"
        )


def _kernel_derivatives(
    base: np.ndarray, log_terms: np.ndarray, order: int
) -> list[np.ndarray]:
    """E, E', ..., E^(order) from E and the log-derivative power sums.

    ``log_terms[r]`` holds L^(r) = sum_k (+-) r! x_k^{r+1} with
    x_k = g_k / (1 - p g_k); the product rule then gives
    E^(m) = sum_j C(m-1, j) E^(j) L^(m-1-j).
    """
    derivs = [base]
    for m in range(1, order + 1):
        acc = np.zeros_like(base)
        for j in range(m):
            acc = acc + math.comb(m - 1, j) * derivs[j] * log_terms[m - 1 - j]
        derivs.append(acc)
    return derivs


def invert_rational(rt: RationalTransform, ts: TimeScale) -> Signal:
    """Closed-form inverse of a strictly proper rational transform.

    Each causal-tagged pole produces its kernel on t_n >= t0, each
    anticausal one the sign-flipped kernel left of t0; multiple poles are
    handled by differentiating the kernel with respect to the pole.
    """
    require_tagged(rt)
    terms = partial_fractions(rt)  # raises ImproperRational when needed
    n = len(ts)
    t0i = ts.t0_index
    steps = ts.steps
    values = np.zeros(n, dtype=complex)
    sup_lo, sup_hi = n, -1

    for pole, coeffs in terms:
        p = pole.location
        m = pole.multiplicity
        if pole.roc == CAUSAL:
            # kernel defined for n in [t0i, n-2]; uses forward steps t0i..n_idx
            _check_pole_on_scale(ts, p, slice(t0i, n - 1))
            idx_hi = n - 2
            if idx_hi < t0i:
                raise BoundaryIndex("no room right of t0 for a causal kernel")
            g = steps[t0i: idx_hi + 1]
            base = np.cumprod(1.0 / (1.0 - p * g))  # e at sigma(t_n)
            if m > 1:
                ratio = g / (1.0 - p * g)
                log_terms = [
                    math.factorial(r) * np.cumsum(ratio ** (r + 1))
                    for r in range(m - 1)
                ]
            else:
                log_terms = []
            derivs = _kernel_derivatives(base, log_terms, m - 1)
            seg = np.zeros(idx_hi - t0i + 1, dtype=complex)
            for j in range(1, m + 1):
                seg += coeffs[j - 1] * derivs[j - 1] / math.factorial(j - 1)
            values[t0i: idx_hi + 1] += seg
            sup_lo, sup_hi = min(sup_lo, t0i), max(sup_hi, idx_hi)
        elif pole.roc == ANTICAUSAL:
            # kernel defined for n <= t0i-1; uses backward steps n+1..t0i-1
            idx_hi = t0i - 1
            if idx_hi < 0:
                continue  # nothing left of t0 in this window
            if m > 1:
                _check_pole_on_scale(ts, p, slice(0, t0i))
            g = steps[:t0i][::-1]  # walking leftwards from t0
            prods = np.cumprod(1.0 - p * g)
            # index t0i-1 pairs with zero factors (sigma(t_n) == t0)
            base = np.concatenate(([1.0 + 0.0j], prods[:-1]))[::-1]
            if m > 1:
                ratio = g / (1.0 - p * g)
                log_sums = [
                    -math.factorial(r)
                    * np.concatenate(([0.0 + 0.0j], np.cumsum(ratio ** (r + 1))[:-1]))[::-1]
                    for r in range(m - 1)
                ]
            else:
                log_sums = []
            derivs = _kernel_derivatives(base, log_sums, m - 1)
            seg = np.zeros(t0i, dtype=complex)
            for j in range(1, m + 1):
                seg += -coeffs[j - 1] * derivs[j - 1] / math.factorial(j - 1)
            values[:t0i] += seg
            sup_lo, sup_hi = min(sup_lo, 0), max(sup_hi, idx_hi)
        else:  # pragma: no cover - require_tagged already screens this
            raise AssertionError("untagged pole slipped through")

    if sup_hi < sup_lo:
        return as_signal(ts, values)
    values[:sup_lo] = 0
    values[sup_hi + 1:] = 0
    return Signal(ts, values, (sup_lo, sup_hi))


def contour_inverse(
    F: Callable[[complex], complex] | np.ndarray,
    ts: TimeScale,
    at: int,
    contour: Contour | None = None,
    kind: str = NABLA,
) -> complex:
    """Numerical inverse transform at one window index.

    ``F`` is either a callable evaluated on the quadrature nodes or a
    precomputed array of node values.  The nabla inversion carries a minus
    sign and pairs the transform with e_nabla(sigma(t_n), t0; s); delta
    mirrors with a plus sign and e_delta(rho(t_n), t0; s).
    """
    values = contour_inverse_profile(F, ts, contour, kind, lo=at, hi=at)
    return complex(values[0])


def contour_inverse_profile(
    F: Callable[[complex], complex] | np.ndarray,
    ts: TimeScale,
    contour: Contour | None = None,
    kind: str = NABLA,
    lo: int | None = None,
    hi: int | None = None,
) -> np.ndarray:
    """Contour inversion for a whole index range, reusing node evaluations."""
    n = len(ts)
    if kind == NABLA:
        lo = ts.t0_index if lo is None else lo
        hi = n - 2 if hi is None else hi
        if hi > n - 2:
            raise BoundaryIndex("nabla inversion needs the instant after t_n")
    else:
        lo = 1 if lo is None else lo
        hi = n - 1 if hi is None else hi
        if lo < 1:
            raise BoundaryIndex("delta inversion needs the instant before t_n")
    if contour is None:
        contour = auto_contour(ts, kind)
    validate_contour(contour, ts, kind)
    s_nodes, unit = contour.points()
    if callable(F):
        f_nodes = np.asarray([complex(F(complex(s))) for s in s_nodes])
    else:
        f_nodes = np.asarray(F, dtype=complex)
        if f_nodes.shape != s_nodes.shape:
            raise ValueError("precomputed node values do not match the contour")
    shift = 1 if kind == NABLA else -1
    kernel = _profile_nodes(ts, ts.t0_index, s_nodes, kind, lo + shift, hi + shift)
    sign = -1.0 if kind == NABLA else 1.0
    quad = kernel @ (f_nodes * unit)
    return sign * (contour.radius / contour.nodes) * quad


def roc_circle(p: complex) -> tuple[float, float] | None:
    """Convergence circle through 0 and p for a causal pole.

    Returns (center, radius) on the real axis, or None when Re(p) <= 0 and
    the region degenerates to a half-plane-like set.
    """
    p = complex(p)
    if p.real <= 0.0:
        return None
    center = abs(p) ** 2 / (2.0 * p.real)
    return center, abs(center)
