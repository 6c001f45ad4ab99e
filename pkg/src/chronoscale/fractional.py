"""Fractional-order derivative kernels and causal power functions.

The uniform-grid kernel tabulates the classical Grünwald-Letnikov weights
h^{-a} (-a)_n / n! through their stable one-term recurrence.  Those are
plain-sum coefficients: the time-scale convolution weights every sample by
its forward step, so before convolving, kernels are rescaled to density
form (one extra 1/step) - that is what makes order 0 the exact identity,
orders 1 and 2 the exact difference quotients, and the kernel's transform
equal s^a instead of h * s^a.

On scales with pairwise distinct steps the kernel value at the n-th
instant after t0 is the residue sum

    (-1)^n sum_k mu_k^{n-1-a} prod_{m != k} 1/(mu_m - mu_k)

over the first n+1 forward steps (a divided difference of x^{n-1-a}).
Divided differences over nearly equal nodes cancel catastrophically in
doubles, so the sum is evaluated in arbitrary precision scaled to the node
separation.  Below 1e-6 relative separation the formula is abandoned for a
circle quadrature of s^a against the exponential, on a path indented to
keep the origin and the negative-axis branch cut outside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from mpmath import mp, mpf

from .calculus import Signal, antiderivative
from .errors import InvalidStep, RepeatedGraininess, WindowTooSmall
from .systems import convolve
from .timescale import NABLA, TimeScale, uniform_grid
from .transform import Contour, auto_contour, unit_step, _profile_nodes

UNIFORM_GL = "uniform_GL"
DISTINCT_RESIDUE = "distinct_residue"
CONTOUR = "contour"

#: Steps are "uniform" when their relative spread stays below this.
UNIFORM_TOL = 1e-12

#: Minimum pairwise relative separation for the distinct-residue formula.
SEPARATION_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class FractionalKernel:
    """Causal weight sequence realizing a fractional derivative.

    Attributes:
        alpha: derivative order
        scale: window the weights live on
        weights: one weight per instant, zero before t0
        method: how the weights were generated
    """

    alpha: float
    scale: TimeScale
    weights: np.ndarray
    method: str

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=complex)
        if w.shape != (len(self.scale),):
            raise ValueError("weights length must match the window length")
        if not np.all(np.isfinite(w)):
            raise ValueError("kernel weights must be finite")
        if np.any(w[: self.scale.t0_index] != 0):
            raise ValueError("kernel weights before t0 must be zero")
        if self.method not in (UNIFORM_GL, DISTINCT_RESIDUE, CONTOUR):
            raise ValueError(f"unknown kernel method {self.method!r}")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)


def gl_weights(alpha: float, h: float, n_terms: int) -> np.ndarray:
    """Grünwald-Letnikov weights h^{-a} (-a)_n / n! via the stable recurrence."""
    if not h > 0:
        raise InvalidStep(f"step must be positive, got {h!r}")
    if n_terms < 1:
        raise ValueError("need at least one weight")
    w = np.empty(n_terms, dtype=float)
    w[0] = h ** (-alpha)
    for n in range(1, n_terms):
        w[n] = w[n - 1] * (n - 1 - alpha) / n
    return w


def gl_kernel_uniform(alpha: float, h: float, n_terms: int) -> FractionalKernel:
    """Kernel of plain-sum GL weights on the uniform grid {0, h, ..}."""
    w = gl_weights(float(alpha), float(h), int(n_terms))
    scale = uniform_grid(h, 0, max(n_terms - 1, 1))
    weights = np.zeros(len(scale), dtype=complex)
    weights[:n_terms] = w
    return FractionalKernel(float(alpha), scale, weights, UNIFORM_GL)


def _forward_steps(ts: TimeScale, count: int) -> np.ndarray:
    lo = ts.t0_index
    if lo + count > len(ts) - 1:
        raise WindowTooSmall(
            f"need {count} forward steps from t0, window holds {len(ts) - 1 - lo}"
        )
    return ts.steps[lo: lo + count]


def _min_relative_separation(mu: np.ndarray) -> float:
    if mu.size < 2:
        return math.inf
    scale = float(np.max(mu))
    sep = math.inf
    for i in range(mu.size):
        for j in range(i + 1, mu.size):
            sep = min(sep, abs(float(mu[i]) - float(mu[j])) / scale)
    return sep


def kernel_distinct(ts: TimeScale, alpha: float, n: int) -> complex:
    """Distinct-graininess kernel value n steps after t0 (0 before t0).

    Evaluates the residue sum as an exact-precision divided difference of
    x^{n-1-a} over the first n+1 forward steps; raises RepeatedGraininess
    when steps cluster below 1e-6 relative separation.
    """
    if n < 0:
        return 0.0 + 0.0j
    mu = _forward_steps(ts, n + 1)
    sep = _min_relative_separation(mu)
    if sep < SEPARATION_TOL:
        raise RepeatedGraininess(
            f"step separation {sep:.3g} below {SEPARATION_TOL}; "
            f"use the contour method"
        )
    digits_lost = 0 if math.isinf(sep) else max(0, int(math.ceil(-math.log10(sep))))
    with mp.workdps(30 + (n + 1) * max(digits_lost, 1)):
        nodes = [mpf(float(m)) for m in mu]
        exponent = mpf(n - 1) - mpf(float(alpha))
        total = mpf(0)
        for k, mk in enumerate(nodes):
            term = mk ** exponent
            for m, mm in enumerate(nodes):
                if m != k:
                    term /= mm - mk
            total += term
        value = (-1) ** n * total
        return complex(float(value), 0.0)


def kernel_contour(
    ts: TimeScale, alpha: float, n: int, contour: Contour | None = None
) -> complex:
    """Kernel value by circle quadrature of s^a against the exponential.

    The automatic contour keeps the origin (and with it the negative-axis
    branch cut of the principal power) strictly outside the path.
    """
    if n < 0:
        return 0.0 + 0.0j
    _forward_steps(ts, n + 1)  # window check
    if contour is None:
        contour = auto_contour(ts, NABLA, exclude_origin=True)
    s_nodes, unit = contour.points()
    kernel = _profile_nodes(
        ts, ts.t0_index, s_nodes, NABLA, ts.t0_index + n + 1, ts.t0_index + n + 1
    )[0]
    power = np.power(s_nodes.astype(complex), alpha)
    return complex(-(contour.radius / contour.nodes) * np.sum(power * kernel * unit))


def _density_kernel(ts: TimeScale, alpha: float) -> FractionalKernel:
    """Kernel in convolution-density form over the window right of t0."""
    n = len(ts)
    t0i = ts.t0_index
    count = n - 1 - t0i  # kernel taps live on [t0i, n-2]
    if count < 1:
        raise WindowTooSmall("no room right of t0 for a causal kernel")
    steps = ts.steps[t0i:]
    spread = float(np.max(steps) - np.min(steps)) / float(np.max(steps))
    weights = np.zeros(n, dtype=complex)
    if spread <= UNIFORM_TOL:
        h = float(steps[0])
        weights[t0i: t0i + count] = gl_weights(alpha, h, count) / h
        method = UNIFORM_GL
    else:
        mu_all = _forward_steps(ts, count)
        if _min_relative_separation(mu_all) >= SEPARATION_TOL:
            for k in range(count):
                weights[t0i + k] = kernel_distinct(ts, alpha, k)
            method = DISTINCT_RESIDUE
        else:
            contour = auto_contour(ts, NABLA, exclude_origin=True)
            s_nodes, unit = contour.points()
            rows = _profile_nodes(ts, t0i, s_nodes, NABLA, t0i + 1, t0i + count)
            power = np.power(s_nodes.astype(complex), alpha)
            vals = -(contour.radius / contour.nodes) * (rows @ (power * unit))
            weights[t0i: t0i + count] = vals
            method = CONTOUR
    return FractionalKernel(alpha, ts, weights, method)


def fractional_derivative(f: Signal, alpha: float) -> Signal:
    """Fractional derivative as convolution with the causal order-a kernel.

    On uniform scales with integer a this reproduces the plain difference
    quotients exactly; a = 0 is the identity.
    """
    kernel = _density_kernel(f.scale, float(alpha))
    t0i = f.scale.t0_index
    hi = max(t0i, len(f.scale) - 2)
    kernel_signal = Signal(f.scale, kernel.weights, (t0i, hi))
    return convolve(kernel_signal, f, allow_interpolation=True)


def power_function(ts: TimeScale, degree: int) -> Signal:
    """Causal power function: the N-fold running sum of the unit step.

    On a uniform grid of step h the value n steps after t0 is
    h^N (N+n)! / (N! n!); degree 0 returns the step itself.
    """
    if degree < 0:
        raise ValueError("degree must be a non-negative integer")
    out = unit_step(ts, "causal")
    if degree == 0:
        return out
    if ts.t0_index < 1:
        raise WindowTooSmall(
            "power functions need one instant before t0 for the backward weight"
        )
    for _ in range(degree):
        out = antiderivative(out, NABLA)
    return out
