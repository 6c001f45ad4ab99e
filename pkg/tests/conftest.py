import numpy as np
import pytest

from chronoscale import TimeScale, as_signal


def make_scale(steps, t0_index=0) -> TimeScale:
    """Scale from a step sequence, first instant at 0."""
    instants = np.concatenate(([0.0], np.cumsum(np.asarray(steps, dtype=float))))
    return TimeScale(instants, t0_index)


def random_scale(rng, n_points, lo=0.1, hi=2.0, t0_index=None) -> TimeScale:
    steps = rng.uniform(lo, hi, n_points - 1)
    if t0_index is None:
        t0_index = int(rng.integers(1, n_points - 1))
    return make_scale(steps, t0_index)


def random_signal(rng, scale, lo, hi):
    """Complex random samples supported on window indices [lo, hi]."""
    values = np.zeros(len(scale), dtype=complex)
    count = hi - lo + 1
    values[lo: hi + 1] = rng.normal(size=count) + 1j * rng.normal(size=count)
    return as_signal(scale, values, (lo, hi))


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
