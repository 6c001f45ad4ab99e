import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chronoscale import (
    antiderivative,
    as_signal,
    build_time_scale,
    definite_integral,
    derivative,
    uniform_grid,
)
from chronoscale.calculus import Signal
from chronoscale.errors import (
    OrderZeroOrNegative,
    ReversedInterval,
    SupportTouchesBoundary,
    WindowTooSmall,
)

from conftest import make_scale, random_scale, random_signal


class TestSignal:
    def test_values_outside_support_must_be_zero(self):
        ts = uniform_grid(1.0, 0, 3)
        with pytest.raises(ValueError):
            Signal(ts, np.array([1, 0, 0, 0], dtype=complex), (1, 2))

    def test_nan_rejected(self):
        ts = uniform_grid(1.0, 0, 3)
        with pytest.raises(ValueError):
            Signal(ts, np.array([0, np.nan, 0, 0], dtype=complex), (1, 2))

    def test_support_inference(self):
        ts = uniform_grid(1.0, 0, 4)
        f = as_signal(ts, [0, 0, 3.0, 1.0, 0])
        assert f.support == (2, 3)

    def test_all_zero_support_degenerates_to_t0(self):
        ts = uniform_grid(1.0, -2, 2)
        f = as_signal(ts, np.zeros(5))
        assert f.support == (2, 2)


class TestDerivative:
    def test_ramp_has_unit_slope(self, rng):
        ts = random_scale(rng, 12)
        f = as_signal(ts, ts.instants.astype(complex), (0, len(ts) - 1))
        d = derivative(f, "nabla")
        lo, hi = d.support
        assert lo == 1
        np.testing.assert_allclose(d.values[lo: hi + 1], 1.0, rtol=1e-13)

    def test_hand_evaluated_spike(self):
        ts = build_time_scale([0, 0.5, 1.5], 0)
        f = as_signal(ts, [0, 1, 0])
        d = derivative(f, "nabla")
        assert d.support == (1, 2)
        assert d.values[1] == pytest.approx(2.0)
        assert d.values[2] == pytest.approx(-1.0)

    def test_constant_kills_any_order(self, rng):
        ts = random_scale(rng, 10)
        f = as_signal(ts, np.full(10, 3.0 - 1.0j), (0, 9))
        for order in (1, 2, 3):
            d = derivative(f, "delta", order)
            lo, hi = d.support
            np.testing.assert_allclose(d.values[lo: hi + 1], 0.0, atol=1e-13)

    def test_uniform_reduction_is_exact(self, rng):
        h = 0.25
        ts = uniform_grid(h, -4, 6)
        f = random_signal(rng, ts, 2, 8)
        d = derivative(f, "nabla")
        expected = (f.values[2:9] - f.values[1:8]) / h
        assert np.array_equal(d.values[2:9], expected)

    def test_order_zero_rejected(self, rng):
        f = random_signal(rng, random_scale(rng, 6), 2, 3)
        with pytest.raises(OrderZeroOrNegative):
            derivative(f, "nabla", 0)
        with pytest.raises(OrderZeroOrNegative):
            derivative(f, "nabla", -2)

    def test_window_too_small(self, rng):
        ts = uniform_grid(1.0, 0, 2)
        f = as_signal(ts, [1.0, 0, 0], (0, 0))
        with pytest.raises(WindowTooSmall):
            derivative(f, "delta", 3)

    def test_boundary_indices_leave_support(self, rng):
        ts = uniform_grid(1.0, 0, 5)
        f = as_signal(ts, np.ones(6), (0, 5))
        d = derivative(f, "nabla")
        assert d.support[0] == 1
        assert d.values[0] == 0

    def test_second_order_matches_twice_applied(self, rng):
        ts = random_scale(rng, 14)
        f = random_signal(rng, ts, 3, 9)
        d2 = derivative(f, "nabla", 2)
        dd = derivative(derivative(f, "nabla"), "nabla")
        lo, hi = d2.support
        np.testing.assert_allclose(d2.values[lo: hi + 1], dd.values[lo: hi + 1], rtol=1e-12)


class TestAntiderivative:
    def test_spike_integrates_to_step(self):
        ts = uniform_grid(1.0, -2, 3)
        f = as_signal(ts, [0, 0, 1.0, 0, 0, 0], (2, 2))
        a = antiderivative(f, "nabla")
        np.testing.assert_allclose(a.values, [0, 0, 1, 1, 1, 1])
        assert a.support == (2, 5)

    def test_unit_step_gives_ramp(self):
        ts = uniform_grid(1.0, -1, 6)
        vals = np.zeros(8)
        vals[1:] = 1.0
        f = as_signal(ts, vals, (1, 7))
        with pytest.raises(SupportTouchesBoundary):
            # support reaches the right edge: the delta sum start is unchecked
            antiderivative(f, "delta")
        a = antiderivative(f, "nabla")
        np.testing.assert_allclose(a.values[1:].real, np.arange(1, 8))

    def test_inverse_pair(self, rng):
        for _ in range(20):
            ts = random_scale(rng, 16)
            f = random_signal(rng, ts, 2, 12)
            for direction in ("nabla", "delta"):
                rec = derivative(antiderivative(f, direction), direction)
                lo, hi = f.support
                err = np.max(np.abs(rec.values[lo: hi + 1] - f.values[lo: hi + 1]))
                assert err <= 1e-13 * max(1.0, np.max(np.abs(f.values)))

    def test_support_touching_boundary_rejected(self, rng):
        ts = uniform_grid(1.0, 0, 4)
        f = as_signal(ts, [1.0, 0, 0, 0, 0], (0, 0))
        with pytest.raises(SupportTouchesBoundary):
            antiderivative(f, "nabla")

    @settings(max_examples=30, deadline=None)
    @given(
        coeffs=st.tuples(
            st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
            st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
        )
    )
    def test_linearity(self, coeffs):
        a, b = coeffs
        rng = np.random.default_rng(99)
        ts = random_scale(rng, 10)
        f = random_signal(rng, ts, 2, 6)
        g = random_signal(rng, ts, 3, 7)
        combo = as_signal(ts, a * f.values + b * g.values, (2, 7))
        lhs = antiderivative(combo, "nabla")
        rhs_vals = a * antiderivative(f, "nabla").values + b * antiderivative(g, "nabla").values
        np.testing.assert_allclose(lhs.values, rhs_vals, atol=1e-10 * (1 + abs(a) + abs(b)))


class TestDefiniteIntegral:
    def test_ones_on_unit_grid(self):
        ts = uniform_grid(1.0, 0, 5)
        f = as_signal(ts, np.ones(6), (0, 5))
        assert definite_integral(f, 0, 3, "nabla") == pytest.approx(3.0)

    def test_empty_interval(self, rng):
        ts = random_scale(rng, 8)
        f = random_signal(rng, ts, 1, 6)
        assert definite_integral(f, 4, 4, "nabla") == 0.0

    def test_nonuniform_ones(self):
        ts = build_time_scale([0, 1, 1.5, 3], 0)
        f = as_signal(ts, np.ones(4), (0, 3))
        assert definite_integral(f, 0, 3, "nabla") == pytest.approx(3.0)

    def test_delta_counts_left_endpoint(self):
        ts = build_time_scale([0, 1, 1.5, 3], 0)
        f = as_signal(ts, np.ones(4), (0, 3))
        # mu_0 + mu_1 + mu_2 = 1 + 0.5 + 1.5
        assert definite_integral(f, 0, 3, "delta") == pytest.approx(3.0)

    def test_reversed(self, rng):
        ts = random_scale(rng, 6)
        f = random_signal(rng, ts, 1, 4)
        with pytest.raises(ReversedInterval):
            definite_integral(f, 3, 1, "nabla")

    def test_additive_over_adjacent_intervals(self, rng):
        ts = random_scale(rng, 12)
        f = random_signal(rng, ts, 1, 10)
        whole = definite_integral(f, 1, 9, "nabla")
        split = definite_integral(f, 1, 5, "nabla") + definite_integral(f, 5, 9, "nabla")
        assert whole == pytest.approx(split, rel=1e-13)
