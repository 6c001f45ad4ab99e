"""Discrete nonuniform time scales and graininess queries.

A time scale is a finite, strictly increasing window of real instants with
one instant singled out as the reference ``t0``.  Backward and forward step
sizes (graininess) at an instant are exact differences of stored instants,
so every quantity derived here is reproducible bit for bit.

The set of all pairwise differences of a scale forms its *super* scale,
which is the natural domain for shifts, interpolation targets and
reflections.  Instances are immutable after construction and safe to share
across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BoundaryIndex,
    IndexOutOfRange,
    InvalidStep,
    NonMonotone,
    TooShort,
)

#: Differences are considered identical iff equal after rounding to this many
#: significant digits; guards only against representation noise.
SIGNIFICANT_DIGITS = 12

NABLA = "nabla"
DELTA = "delta"


def round_key(x: float) -> str:
    """Canonical identity key for an instant or difference (12 sig. digits)."""
    if x == 0.0:
        x = 0.0  # collapse -0.0
    return f"{x:.{SIGNIFICANT_DIGITS - 1}e}"


def _check_direction(direction: str) -> None:
    if direction not in (NABLA, DELTA):
        raise ValueError(f"direction must be 'nabla' or 'delta', got {direction!r}")


@dataclass(frozen=True, eq=False)
class TimeScale:
    """Ordered window of instants with a reference index.

    Attributes:
        instants: strictly increasing real instants (read-only array)
        t0_index: index of the reference instant t0
    """

    instants: np.ndarray
    t0_index: int
    steps: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        arr = np.asarray(self.instants, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise TooShort("instants must be a non-empty 1-d sequence")
        if arr.size < 2:
            raise TooShort(f"a time scale needs at least 2 instants, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise NonMonotone("instants must be finite")
        diffs = np.diff(arr)
        if np.any(diffs <= 0.0):
            bad = int(np.argmax(diffs <= 0.0))
            raise NonMonotone(
                f"instants must be strictly increasing; violated between "
                f"index {bad} ({arr[bad]!r}) and {bad + 1} ({arr[bad + 1]!r})"
            )
        if not 0 <= self.t0_index < arr.size:
            raise IndexOutOfRange(
                f"t0_index {self.t0_index} outside window of length {arr.size}"
            )
        arr.flags.writeable = False
        diffs.flags.writeable = False
        object.__setattr__(self, "instants", arr)
        object.__setattr__(self, "steps", diffs)

    def __len__(self) -> int:
        return int(self.instants.size)

    @property
    def t0(self) -> float:
        return float(self.instants[self.t0_index])

    def check_index(self, n: int) -> None:
        if not 0 <= n < len(self):
            raise IndexOutOfRange(f"index {n} outside window of length {len(self)}")

    def nu(self, n: int) -> float:
        """Backward step t_n - t_{n-1}."""
        self.check_index(n)
        if n - 1 < 0:
            raise BoundaryIndex(f"no instant before index {n}")
        return float(self.steps[n - 1])

    def mu(self, n: int) -> float:
        """Forward step t_{n+1} - t_n."""
        self.check_index(n)
        if n + 1 >= len(self):
            raise BoundaryIndex(f"no instant after index {n}")
        return float(self.steps[n])

    def index_of(self, instant: float) -> int | None:
        """Window index whose instant matches to 12 significant digits."""
        key = round_key(instant)
        lookup = _index_map(self)
        return lookup.get(key)


_INDEX_MAPS: dict[int, dict[str, int]] = {}


def _index_map(ts: TimeScale) -> dict[str, int]:
    # Keyed by id(); scales are immutable so the cache stays valid while the
    # object is alive.  Collisions after garbage collection just rebuild.
    cached = _INDEX_MAPS.get(id(ts))
    if cached is not None and len(cached) == len(ts):
        return cached
    table = {round_key(float(t)): i for i, t in enumerate(ts.instants)}
    _INDEX_MAPS[id(ts)] = table
    return table


@dataclass(frozen=True, eq=False)
class SuperTimeScale:
    """All pairwise differences of a parent scale, deduplicated and sorted.

    Contains 0 and is closed under negation.
    """

    instants: np.ndarray
    origin_index: int

    def __post_init__(self) -> None:
        arr = np.asarray(self.instants, dtype=float)
        arr.flags.writeable = False
        object.__setattr__(self, "instants", arr)

    def __len__(self) -> int:
        return int(self.instants.size)

    def contains(self, value: float) -> bool:
        return round_key(value) in self._keys()

    def _keys(self) -> set[str]:
        cached = _SUPER_KEYS.get(id(self))
        if cached is not None and len(cached) == len(self):
            return cached
        keys = {round_key(float(v)) for v in self.instants}
        _SUPER_KEYS[id(self)] = keys
        return keys


_SUPER_KEYS: dict[int, set[str]] = {}


def build_time_scale(instants, t0_index: int) -> TimeScale:
    """Construct a validated time scale; instants are stored exactly as given."""
    return TimeScale(np.array(instants, dtype=float), int(t0_index))


def graininess(ts: TimeScale, n: int, direction: str) -> float:
    """Step size at index ``n``: backward (nabla) or forward (delta)."""
    _check_direction(direction)
    return ts.nu(n) if direction == NABLA else ts.mu(n)


def cumulative_graininess(ts: TimeScale, from_index: int, steps: int, direction: str) -> float:
    """Distance covered by ``steps`` consecutive steps from an instant.

    Computed as a single difference of stored instants, which equals the sum
    of the per-step graininess values exactly.
    """
    _check_direction(direction)
    ts.check_index(from_index)
    if steps < 0:
        raise ValueError("step count must be non-negative")
    if steps == 0:
        return 0.0
    if direction == NABLA:
        other = from_index - steps
        if other < 0:
            raise BoundaryIndex(
                f"{steps} backward steps from index {from_index} leave the window"
            )
        return float(ts.instants[from_index] - ts.instants[other])
    other = from_index + steps
    if other >= len(ts):
        raise BoundaryIndex(
            f"{steps} forward steps from index {from_index} leave the window"
        )
    return float(ts.instants[other] - ts.instants[from_index])


def super_time_scale(ts: TimeScale) -> SuperTimeScale:
    """All pairwise differences t_n - t_k, deduplicated to 12 sig. digits."""
    t = ts.instants
    diffs = (t[:, None] - t[None, :]).ravel()
    order = np.argsort(diffs, kind="stable")
    diffs = diffs[order]
    values: list[float] = []
    seen: set[str] = set()
    for d in diffs:
        key = round_key(float(d))
        if key not in seen:
            seen.add(key)
            values.append(float(d))
    arr = np.array(values, dtype=float)
    origin = int(np.argmin(np.abs(arr)))
    return SuperTimeScale(arr, origin)


def uniform_grid(h: float, n_min: int, n_max: int) -> TimeScale:
    """Uniform scale {n*h} for n in [n_min, n_max], reference at n = 0."""
    if not h > 0.0:
        raise InvalidStep(f"step must be positive, got {h!r}")
    if not n_min <= 0 <= n_max:
        raise IndexOutOfRange(f"need n_min <= 0 <= n_max, got [{n_min}, {n_max}]")
    instants = np.arange(n_min, n_max + 1, dtype=float) * float(h)
    return TimeScale(instants, -n_min)


def same_scale(a: TimeScale, b: TimeScale) -> bool:
    """True iff the two windows store identical instants and reference."""
    return (
        a.t0_index == b.t0_index
        and len(a) == len(b)
        and bool(np.array_equal(a.instants, b.instants))
    )
