"""Rational transfer functions: poles, multiplicities and partial fractions.

Coefficients are stored lowest order first and the denominator is kept
monic.  Partial-fraction coefficients come from local power-series division
around each pole, which stays accurate for complex coefficients and
multiple poles without relying on global least squares.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDenominator, ImproperRational, UntaggedPole

CAUSAL = "causal"
ANTICAUSAL = "anticausal"

#: Roots closer than this relative distance are clustered into one pole.
CLUSTER_TOL = 1e-8

#: Expanded poles must reproduce the denominator coefficients this tightly.
EXPANSION_TOL = 1e-10


@dataclass(frozen=True)
class Pole:
    location: complex
    multiplicity: int
    roc: str | None  # "causal", "anticausal", or None (untagged)

    def __post_init__(self) -> None:
        if self.multiplicity < 1:
            raise ValueError("pole multiplicity must be >= 1")
        if self.roc not in (None, CAUSAL, ANTICAUSAL):
            raise ValueError(f"roc must be causal/anticausal/None, got {self.roc!r}")


@dataclass(frozen=True, eq=False)
class RationalTransform:
    """H(s) = num(s) / den(s) with per-pole region-of-convergence tags."""

    num: np.ndarray  # b_0 .. b_M, lowest order first
    den: np.ndarray  # a_0 .. a_N, monic (a_N == 1)
    poles: tuple[Pole, ...]

    def __post_init__(self) -> None:
        num = np.atleast_1d(np.asarray(self.num, dtype=complex))
        den = np.atleast_1d(np.asarray(self.den, dtype=complex))
        if den.size == 0 or not np.any(den != 0):
            raise DegenerateDenominator("denominator is empty or all zero")
        if abs(den[-1] - 1.0) > 1e-12:
            raise ValueError("denominator must be monic (a_N == 1)")
        total_mult = sum(p.multiplicity for p in self.poles)
        if total_mult != den.size - 1:
            raise ValueError(
                f"pole multiplicities sum to {total_mult}, expected {den.size - 1}"
            )
        expanded = expand_poles(self.poles)
        scale = max(1.0, float(np.max(np.abs(den))))
        if np.max(np.abs(expanded - den)) > EXPANSION_TOL * scale:
            raise ValueError("poles do not reproduce the denominator coefficients")
        num.flags.writeable = False
        den.flags.writeable = False
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "poles", tuple(self.poles))

    @property
    def num_degree(self) -> int:
        nz = np.nonzero(self.num)[0]
        return int(nz[-1]) if nz.size else 0

    @property
    def den_degree(self) -> int:
        return int(self.den.size - 1)

    def is_strictly_proper(self) -> bool:
        if not np.any(self.num != 0):
            return True
        return self.num_degree < self.den_degree

    def __call__(self, s: complex) -> complex:
        return complex(_polyval(self.num, s) / _polyval(self.den, s))

    def retagged(self, roc: str) -> "RationalTransform":
        """Copy with every pole tagged with the given region of convergence."""
        poles = tuple(Pole(p.location, p.multiplicity, roc) for p in self.poles)
        return RationalTransform(self.num, self.den, poles)


def _polyval(coeffs: np.ndarray, s: complex) -> complex:
    acc = 0.0 + 0.0j
    for c in coeffs[::-1]:
        acc = acc * s + c
    return acc


def expand_poles(poles: tuple[Pole, ...]) -> np.ndarray:
    """Monic polynomial (lowest order first) with the given roots."""
    coeffs = np.array([1.0 + 0.0j])
    for p in poles:
        for _ in range(p.multiplicity):
            # multiply by (s - location)
            shifted = np.concatenate(([0.0 + 0.0j], coeffs))
            shifted[:-1] -= p.location * coeffs
            coeffs = shifted
    return coeffs


def cluster_roots(roots: np.ndarray, roc: str | None = CAUSAL) -> tuple[Pole, ...]:
    """Group nearly coincident roots into poles with multiplicities."""
    remaining = sorted(
        (complex(r) for r in roots), key=lambda z: (round(z.real, 12), round(z.imag, 12))
    )
    poles: list[Pole] = []
    while remaining:
        seed = remaining.pop(0)
        cluster = [seed]
        tol = CLUSTER_TOL * max(1.0, abs(seed))
        rest: list[complex] = []
        for z in remaining:
            if abs(z - seed) <= tol:
                cluster.append(z)
            else:
                rest.append(z)
        remaining = rest
        center = sum(cluster) / len(cluster)
        poles.append(Pole(center, len(cluster), roc))
    return tuple(poles)


def _taylor_at(coeffs: np.ndarray, p: complex, terms: int) -> np.ndarray:
    """First ``terms`` Taylor coefficients of the polynomial around p."""
    work = np.array(coeffs, dtype=complex)
    out = np.zeros(terms, dtype=complex)
    # repeated synthetic division by (s - p)
    for k in range(terms):
        if work.size == 0:
            break
        rem = 0.0 + 0.0j
        for c in work[::-1]:
            rem = rem * p + c
        out[k] = rem
        if work.size == 1:
            work = np.array([], dtype=complex)
            continue
        quotient = np.empty(work.size - 1, dtype=complex)
        acc = work[-1]
        for i in range(work.size - 2, -1, -1):
            quotient[i] = acc
            acc = work[i] + acc * p
        work = quotient
    return out


def _series_divide(a: np.ndarray, b: np.ndarray, terms: int) -> np.ndarray:
    """Power-series quotient a/b to ``terms`` coefficients (b[0] != 0)."""
    q = np.zeros(terms, dtype=complex)
    for k in range(terms):
        acc = a[k] if k < a.size else 0.0
        for j in range(k):
            bj = b[k - j] if k - j < b.size else 0.0
            acc -= q[j] * bj
        q[k] = acc / b[0]
    return q


def partial_fractions(rt: RationalTransform) -> list[tuple[Pole, np.ndarray]]:
    """Decompose a strictly proper H into sum_j c_j / (s - p)^j per pole.

    Returns, for each pole of multiplicity m, the coefficient array
    [c_1, ..., c_m] where c_j multiplies (s - p)^{-j}.
    """
    if not rt.is_strictly_proper():
        raise ImproperRational(
            f"numerator degree {rt.num_degree} must be below "
            f"denominator degree {rt.den_degree}"
        )
    result: list[tuple[Pole, np.ndarray]] = []
    for pole in rt.poles:
        m = pole.multiplicity
        others = tuple(p for p in rt.poles if p is not pole)
        rest = expand_poles(others)
        a = _taylor_at(rt.num, pole.location, m)
        b = _taylor_at(rest, pole.location, m)
        series = _series_divide(a, b, m)
        # series[i] is the coefficient of (s-p)^i in num/rest; c_j = series[m-j]
        coeffs = series[::-1].copy()
        result.append((pole, coeffs))
    return result


def require_tagged(rt: RationalTransform) -> None:
    untagged = [p for p in rt.poles if p.roc is None]
    if untagged:
        raise UntaggedPole(
            f"{len(untagged)} pole(s) missing a causal/anticausal tag"
        )
