"""Linear systems on a time scale: simulation, convolution, resampling.

The marching simulator advances the dynamic equation
``sum_k a_k y^{(k)} = sum_k b_k x^{(k)}`` one instant at a time with zero
pre-support state.  Its difference stencils divide by the *forward* step at
the evaluation instant: with that convention the series transform of the
stencil telescopes exactly to multiplication by s (the forward series
weight cancels the divisor), so the simulated output agrees with the
residue-catalog impulse response on any scale, not just uniform ones.

Shifts and convolution evaluate a signal at pairwise differences of the
grid.  On shift-closed grids (always on uniform ones) a direct lookup is
exact; otherwise values come from the transform-preserving interpolation,
which reduces to a circle quadrature of F (or F*G) against the shifted
exponential kernel.  The interpolating path is opt-in because it costs a
full quadrature per output sample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .calculus import Signal, as_signal
from .errors import (
    DegenerateDenominator,
    IncompatibleStep,
    ReflectionOffGrid,
    ScaleMismatch,
    SingularStep,
    SupportTouchesBoundary,
    TargetOffSuperScale,
    WindowTooSmall,
)
from .rational import CAUSAL, Pole, RationalTransform, cluster_roots
from .timescale import NABLA, TimeScale, same_scale, super_time_scale
from .transform import (
    Contour,
    auto_contour,
    contour_inverse_profile,
    direct_transform_nodes,
    invert_rational,
    _profile_nodes,
)

__all__ = [
    "RationalTransform",
    "Pole",
    "SimulationSummary",
    "transfer_function",
    "impulse_response",
    "simulate",
    "shifted_transform_factor",
    "interpolate",
    "convolve",
    "correlate",
    "resample_uniform",
]

#: Relative guard below which the marching step counts as singular.
SINGULAR_TOL = 1e-12


def _clean_coeffs(a) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(a, dtype=complex))
    nz = np.nonzero(arr)[0]
    if nz.size == 0:
        raise DegenerateDenominator("coefficients are empty or all zero")
    return arr[: nz[-1] + 1]


def transfer_function(a, b) -> RationalTransform:
    """Build H(s) = sum b_k s^k / sum a_k s^k from equation coefficients.

    The denominator is normalised to be monic, poles are found by companion
    root finding and clustered into multiplicities, and every pole starts
    with a causal region-of-convergence tag.
    """
    den = _clean_coeffs(a)
    num = np.atleast_1d(np.asarray(b, dtype=complex))
    lead = den[-1]
    den = den / lead
    num = num / lead
    if den.size == 1:
        return RationalTransform(num, den, ())
    roots = np.roots(den[::-1])
    poles = cluster_roots(roots, roc=CAUSAL)
    # snap the stored denominator onto the clustered poles so the
    # reproduction invariant holds exactly even for multiple roots
    return RationalTransform(num, den, poles)


def impulse_response(rt: RationalTransform, ts: TimeScale) -> Signal:
    """Inverse transform of a strictly proper H on the given window."""
    return invert_rational(rt, ts)


@dataclass(frozen=True)
class SimulationSummary:
    steps: int
    singular_margin: float  # smallest |sum a_k h^-k| relative to its size


def simulate(a, b, x: Signal, with_summary: bool = False):
    """March the dynamic equation over the window with zero initial state.

    The k-th derivative stencil at index i carries the coefficient
    mu_i^{-k} on the newest sample, so each instant reduces to one scalar
    linear solve.  Raises SingularStep when that coefficient sum vanishes,
    i.e. when the reciprocal of the local step is a zero of the denominator
    polynomial.
    """
    den = _clean_coeffs(a)
    num = np.atleast_1d(np.asarray(b, dtype=complex))
    lead = den[-1]
    den = den / lead
    num = num / lead
    N = den.size - 1
    M = num.size - 1
    scale = x.scale
    n = len(scale)
    steps = scale.steps
    lo, hi = x.support
    need = max(1, N, M)
    if lo < need:
        raise WindowTooSmall(
            f"support starts at index {lo}; need {need} history instants before it"
        )
    if lo > n - 2:
        raise WindowTooSmall("no marchable instants right of the support start")

    # forward-step derivative stack of the input, valid on the marching range
    dx = np.zeros((M + 1, n), dtype=complex)
    dx[0] = x.values
    for k in range(1, M + 1):
        dx[k, 1: n - 1] = (dx[k - 1, 1: n - 1] - dx[k - 1, : n - 2]) / steps[1: n - 1]

    hist = np.zeros((N + 1, n), dtype=complex)  # sigma-shifted derivative stack of y
    y = np.zeros(n, dtype=complex)
    margin = math.inf
    for i in range(lo, n - 1):
        h = steps[i]
        powers = h ** -np.arange(N + 1)
        pivot = complex(np.sum(den * powers))
        size = float(np.sum(np.abs(den) * powers))
        if abs(pivot) <= SINGULAR_TOL * size:
            raise SingularStep(
                f"step at index {i} makes the marching equation singular "
                f"(1/{h!r} is a denominator zero)"
            )
        margin = min(margin, abs(pivot) / size)
        known = 0.0 + 0.0j
        w = 0.0 + 0.0j
        for k in range(1, N + 1):
            w = (w - hist[k - 1, i - 1]) / h
            known += den[k] * w
        rhs = complex(np.sum(num * dx[:, i]))
        yi = (rhs - known) / pivot
        z = yi
        hist[0, i] = z
        for k in range(1, N + 1):
            z = (z - hist[k - 1, i - 1]) / h
            hist[k, i] = z
        y[i] = yi

    out = Signal(scale, y, (lo, n - 2))
    if with_summary:
        return out, SimulationSummary(steps=n - 1 - lo, singular_margin=margin)
    return out


def shifted_transform_factor(ts: TimeScale, m: int, s: complex) -> complex:
    """Multiplier on F(s) produced by re-referencing a signal to t_m.

    Equals e_delta(t_m, t0; -s): on a uniform grid with t_m = m*h this is
    (1 - s h)^m, exactly the factor the shifted series picks up.
    """
    from .exponential import exp as _exp
    from .timescale import DELTA

    ts.check_index(m)
    return _exp(ts, m, ts.t0_index, -s, DELTA)


def _find_pair(ts: TimeScale, target: float) -> tuple[int, int] | None:
    """Indices (i, j) with t_i - t_j == target (12 sig. digits), i <= len-2.

    Prefers the pair whose reference index is closest to t0 so that on-grid
    targets reduce to the identity kernel.
    """
    n = len(ts)
    order = sorted(range(n), key=lambda j: (abs(j - ts.t0_index), j))
    fallback = None
    for j in order:
        i = ts.index_of(float(ts.instants[j]) + target)
        if i is None:
            continue
        if i <= n - 2:
            return i, j
        fallback = (i, j)
    if fallback is not None:
        raise TargetOffSuperScale(
            f"target {target!r} is only representable at the last window "
            f"instant, where the forward jump is undefined"
        )
    return None


def interpolate(
    f: Signal,
    target: float,
    contour: Contour | None = None,
    pair: tuple[int, int] | None = None,
) -> complex:
    """Transform-preserving value of ``f`` at a super-scale point.

    ``target`` is a difference of grid instants (measured from t0).  The
    value is the circle quadrature of F(s) against the shifted kernel
    e_nabla(sigma(t_i), t_j; s) for a pair with t_i - t_j == target; when
    the target is itself a grid offset the kernel integrates to a Kronecker
    delta and the sample is reproduced exactly.
    """
    ts = f.scale
    if pair is None:
        pair = _find_pair(ts, float(target))
        if pair is None:
            raise TargetOffSuperScale(
                f"{target!r} is not a pairwise difference of the grid instants"
            )
    i_t, i_m = pair
    ts.check_index(i_t)
    ts.check_index(i_m)
    if i_t + 1 >= len(ts):
        raise TargetOffSuperScale("pair needs the instant after its left member")
    if contour is None:
        contour = auto_contour(ts, NABLA)
    s_nodes, unit = contour.points()
    f_nodes = direct_transform_nodes(f, s_nodes, NABLA)
    kernel = _profile_nodes(ts, i_m, s_nodes, NABLA, i_t + 1, i_t + 1)[0]
    value = -(contour.radius / contour.nodes) * np.sum(f_nodes * kernel * unit)
    return complex(value)


def _fast_convolution(weighted: Signal, looked_up: Signal) -> tuple[np.ndarray, tuple[int, int]] | None:
    """Shift-closed convolution; None when a needed lookup is off-grid."""
    scale = weighted.scale
    n = len(scale)
    wlo, whi = weighted.support
    if whi >= n - 1:
        raise WindowTooSmall(
            "weighted support reaches the right window edge; forward weight undefined"
        )
    t = scale.instants
    t0 = scale.t0
    span_tol = 1e-9 * float(t[-1] - t[0])
    out = np.zeros(n, dtype=complex)
    llo, lhi = looked_up.support
    sup_lo, sup_hi = n, -1
    for m in range(wlo, whi + 1):
        wm = scale.steps[m] * weighted.values[m]
        if wm == 0:
            continue
        shift = t0 - float(t[m])
        for i in range(n):
            tau = float(t[i]) + shift
            j = scale.index_of(tau)
            if j is None:
                if tau < t[0] - span_tol or tau > t[-1] + span_tol:
                    continue  # zero by the finite-support contract
                return None  # off-grid inside the span: not shift-closed
            if looked_up.values[j] != 0:
                out[i] += wm * looked_up.values[j]
            if llo <= j <= lhi:
                sup_lo, sup_hi = min(sup_lo, i), max(sup_hi, i)
    if sup_hi < sup_lo:
        sup_lo = sup_hi = scale.t0_index
    return out, (sup_lo, sup_hi)


def convolve(
    f: Signal,
    g: Signal,
    allow_interpolation: bool = False,
    contour: Contour | None = None,
) -> Signal:
    """Weighted convolution ``sum_m mu_m f(t_m) g(t_n - t_m)``.

    Tries the shift-closed lookup in both orientations first (the two agree
    whenever both exist, since they share the transform F*G).  If the grid
    is not shift-closed the interpolating path inverts F*G on a contour,
    but only when ``allow_interpolation`` is set: it is a full quadrature
    per output sample and silent slowdowns are worse than errors.
    """
    if not same_scale(f.scale, g.scale):
        raise ScaleMismatch("signals live on different scales")
    fast = _fast_convolution(f, g)
    if fast is None:
        fast = _fast_convolution(g, f)
    if fast is not None:
        values, support = fast
        values[: support[0]] = 0
        values[support[1] + 1:] = 0
        return Signal(f.scale, values, support)
    if not allow_interpolation:
        raise ScaleMismatch(
            "grid is not shift-closed for this convolution; pass "
            "allow_interpolation=True to use the interpolating path"
        )
    ts = f.scale
    n = len(ts)
    if contour is None:
        contour = auto_contour(ts, NABLA)
    s_nodes, _ = contour.points()
    fg_nodes = direct_transform_nodes(f, s_nodes, NABLA) * direct_transform_nodes(
        g, s_nodes, NABLA
    )
    values = np.zeros(n, dtype=complex)
    values[: n - 1] = contour_inverse_profile(fg_nodes, ts, contour, NABLA, lo=0, hi=n - 2)
    return Signal(ts, values, (0, n - 2))


def _reflect(g: Signal) -> Signal:
    """Mirror a signal through t0 on the negation-symmetric super scale."""
    scale = g.scale
    n = len(scale)
    t = scale.instants
    double_t0 = 2.0 * scale.t0
    glo, ghi = g.support
    for k in range(glo, ghi + 1):
        if g.values[k] == 0:
            continue
        if scale.index_of(double_t0 - float(t[k])) is None:
            raise ReflectionOffGrid(
                f"support instant {float(t[k])!r} reflects to "
                f"{double_t0 - float(t[k])!r}, which is not a window instant"
            )
    values = np.zeros(n, dtype=complex)
    touched: list[int] = []
    for i in range(n):
        j = scale.index_of(double_t0 - float(t[i]))
        if j is None:
            continue
        values[i] = g.values[j]
        if glo <= j <= ghi:
            touched.append(i)
    if touched:
        support = (min(touched), max(touched))
    else:
        support = (scale.t0_index, scale.t0_index)
    values[: support[0]] = 0
    values[support[1] + 1:] = 0
    return Signal(scale, values, support)


def correlate(
    f: Signal,
    g: Signal,
    allow_interpolation: bool = False,
    contour: Contour | None = None,
) -> Signal:
    """Correlation as convolution with the reflected second signal."""
    if not same_scale(f.scale, g.scale):
        raise ScaleMismatch("signals live on different scales")
    return convolve(f, _reflect(g), allow_interpolation=allow_interpolation, contour=contour)


def resample_uniform(
    f: Signal,
    h: float,
    contour: Contour | None = None,
) -> Signal:
    """Interpolate onto the uniform grid t0 + k*h spanning the window.

    Every target offset k*h must be a super-scale point (a pairwise
    difference of grid instants); resampling a uniform signal at its own
    step reproduces the samples.
    """
    if not h > 0:
        raise IncompatibleStep(f"resampling step must be positive, got {h!r}")
    ts = f.scale
    t = ts.instants
    t0 = ts.t0
    eps = 1e-9
    k_min = math.ceil((float(t[0]) - t0) / h - eps)
    k_max = math.floor((float(t[-1]) - t0) / h + eps)
    if k_min > 0 or k_max < 0 or k_max <= k_min:
        raise IncompatibleStep(
            f"step {h!r} leaves no uniform grid inside the window span"
        )
    sup = super_time_scale(ts)
    offsets = np.arange(k_min, k_max + 1, dtype=float) * float(h)
    for off in offsets:
        if not sup.contains(float(off)):
            raise IncompatibleStep(
                f"target offset {off!r} is not a pairwise difference of the "
                f"grid instants; choose a compatible step"
            )
    if contour is None:
        contour = auto_contour(ts, NABLA)
    values = np.array(
        [interpolate(f, float(off), contour=contour) for off in offsets],
        dtype=complex,
    )
    new_scale = TimeScale(offsets + t0, -k_min)
    return Signal(new_scale, values, (0, len(new_scale) - 1))
