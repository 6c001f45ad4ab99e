"""Backward/forward difference calculus for signals on a time scale.

A :class:`Signal` is a complex-valued sample per window instant plus an
explicit support interval; outside the support the signal is zero by
contract, which turns every conceptually infinite sum into an exact finite
one.  Derivatives whose stencil would leave the window are excluded from
the result support instead of being zero-filled.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    IndexOutOfRange,
    OrderZeroOrNegative,
    ReversedInterval,
    SupportTouchesBoundary,
    WindowTooSmall,
)
from .timescale import DELTA, NABLA, TimeScale, _check_direction


@dataclass(frozen=True, eq=False)
class Signal:
    """Complex samples on a time-scale window with finite support.

    Attributes:
        scale: the window the samples live on
        values: one complex amplitude per instant (read-only array)
        support: inclusive index interval [lo, hi]; values outside are zero
    """

    scale: TimeScale
    values: np.ndarray
    support: tuple[int, int]

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=complex)
        n = len(self.scale)
        if vals.shape != (n,):
            raise ValueError(
                f"values length {vals.shape} does not match window length {n}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("signal values must be finite")
        lo, hi = self.support
        if not (0 <= lo <= hi < n):
            raise IndexOutOfRange(f"support {self.support} invalid for window of {n}")
        if np.any(vals[:lo] != 0) or np.any(vals[hi + 1:] != 0):
            raise ValueError("values outside the declared support must be zero")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "support", (int(lo), int(hi)))


def as_signal(scale: TimeScale, values, support: tuple[int, int] | None = None) -> Signal:
    """Build a signal, inferring the support from nonzero samples if omitted.

    An all-zero sample array gets the degenerate support [t0, t0].
    """
    vals = np.asarray(values, dtype=complex)
    if support is None:
        nz = np.nonzero(vals)[0]
        if nz.size == 0:
            support = (scale.t0_index, scale.t0_index)
        else:
            support = (int(nz[0]), int(nz[-1]))
    return Signal(scale, vals, support)


def zero_signal(scale: TimeScale) -> Signal:
    return as_signal(scale, np.zeros(len(scale), dtype=complex))


def derivative(f: Signal, direction: str, order: int = 1) -> Signal:
    """Repeated backward (nabla) or forward (delta) difference quotient.

    The nabla step at index n uses (f_n - f_{n-1}) / (t_n - t_{n-1}); delta
    mirrors it forward.  After N applications the result is exact for
    indices whose full N-deep stencil lies inside the window; everything
    else is outside the result support.
    """
    _check_direction(direction)
    if not isinstance(order, (int, np.integer)) or order < 1:
        raise OrderZeroOrNegative(f"derivative order must be >= 1, got {order!r}")
    n = len(f.scale)
    steps = f.scale.steps
    lo, hi = f.support
    vals = np.array(f.values, dtype=complex)
    for _ in range(order):
        out = np.zeros(n, dtype=complex)
        if direction == NABLA:
            out[1:] = (vals[1:] - vals[:-1]) / steps
        else:
            out[:-1] = (vals[1:] - vals[:-1]) / steps
        vals = out
    if direction == NABLA:
        new_lo, new_hi = max(lo, order), min(hi + order, n - 1)
    else:
        new_lo, new_hi = max(lo - order, 0), min(hi, n - 1 - order)
    if new_lo > new_hi:
        raise WindowTooSmall(
            f"order-{order} {direction} derivative leaves no computable index "
            f"for support {f.support} in a window of {n}"
        )
    vals[:new_lo] = 0
    vals[new_hi + 1:] = 0
    return Signal(f.scale, vals, (new_lo, new_hi))


def antiderivative(f: Signal, direction: str) -> Signal:
    """Weighted running sum inverting the matching derivative.

    nabla: F_n = sum_{m<=n} nu_m f_m, accumulating rightward; delta:
    F_n = -sum_{m>=n} mu_m f_m, accumulating leftward.  The support must not
    touch the edge on the accumulation-start side, otherwise the zero-tail
    assumption behind the running sum cannot be checked.
    """
    _check_direction(direction)
    n = len(f.scale)
    steps = f.scale.steps
    lo, hi = f.support
    out = np.zeros(n, dtype=complex)
    if direction == NABLA:
        if lo == 0:
            raise SupportTouchesBoundary(
                "support reaches the left window edge; backward weight undefined"
            )
        weighted = steps[lo - 1:] * f.values[lo:]
        out[lo:] = np.cumsum(weighted)
        return Signal(f.scale, out, (lo, n - 1))
    if hi == n - 1:
        raise SupportTouchesBoundary(
            "support reaches the right window edge; forward weight undefined"
        )
    weighted = steps[: hi + 1] * f.values[: hi + 1]
    out[: hi + 1] = -np.cumsum(weighted[::-1])[::-1]
    return Signal(f.scale, out, (0, hi))


def definite_integral(f: Signal, a: int, b: int, direction: str) -> complex:
    """Definite nabla/delta integral between two window indices.

    nabla sums nu_n f_n over a < n <= b; delta sums mu_n f_n over a <= n < b.
    """
    _check_direction(direction)
    f.scale.check_index(a)
    f.scale.check_index(b)
    if a > b:
        raise ReversedInterval(f"need a <= b, got a={a}, b={b}")
    if a == b:
        return 0.0 + 0.0j
    steps = f.scale.steps
    if direction == NABLA:
        return complex(np.sum(steps[a:b] * f.values[a + 1: b + 1]))
    return complex(np.sum(steps[a:b] * f.values[a:b]))
