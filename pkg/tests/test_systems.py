import numpy as np
import pytest

from chronoscale import (
    Pole,
    RationalTransform,
    as_signal,
    auto_contour,
    build_time_scale,
    convolve,
    correlate,
    direct_transform,
    impulse,
    impulse_response,
    interpolate,
    resample_uniform,
    shifted_transform_factor,
    simulate,
    transfer_function,
    uniform_grid,
    unit_step,
)
from chronoscale.errors import (
    DegenerateDenominator,
    ImproperRational,
    IncompatibleStep,
    ReflectionOffGrid,
    ScaleMismatch,
    SingularStep,
    TargetOffSuperScale,
    WindowTooSmall,
)

from conftest import make_scale, random_scale, random_signal


def random_stable_system(rng, max_order=4):
    """Random strictly proper system with poles in the left half plane."""
    n = int(rng.integers(1, max_order + 1))
    poles = []
    while len(poles) < n:
        if n - len(poles) >= 2 and rng.random() < 0.4:
            p = complex(rng.uniform(-2.0, -0.2), rng.uniform(0.2, 1.0))
            poles.extend([p, p.conjugate()])
        else:
            poles.append(complex(rng.uniform(-2.0, -0.2), 0.0))
    den = np.array([1.0 + 0j])
    for p in poles:
        den = np.convolve(den, [-p, 1.0])
    m = int(rng.integers(0, n))
    num = rng.normal(size=m + 1) + 0j
    return den, num


class TestTransferFunction:
    def test_single_pole(self):
        rt = transfer_function([2.0, 1.0], [1.0])
        assert len(rt.poles) == 1
        assert rt.poles[0].location == pytest.approx(-2.0)
        assert rt.poles[0].roc == "causal"

    def test_quadratic(self):
        rt = transfer_function([2.0, 3.0, 1.0], [1.0])
        locs = sorted(p.location.real for p in rt.poles)
        assert locs == pytest.approx([-2.0, -1.0])

    def test_normalization(self):
        rt = transfer_function([4.0, 2.0], [6.0])
        assert rt.den[-1] == 1.0
        assert rt.den[0] == pytest.approx(2.0)
        assert rt.num[0] == pytest.approx(3.0)

    def test_degenerate(self):
        with pytest.raises(DegenerateDenominator):
            transfer_function([], [1.0])
        with pytest.raises(DegenerateDenominator):
            transfer_function([0.0, 0.0], [1.0])

    def test_poles_reproduce_denominator(self, rng):
        for _ in range(10):
            den, num = random_stable_system(rng)
            rt = transfer_function(den, num)
            from chronoscale.rational import expand_poles

            np.testing.assert_allclose(expand_poles(rt.poles), rt.den, atol=1e-10)


class TestImpulseResponse:
    def test_first_order_catalog(self):
        ts = uniform_grid(1.0, -2, 10)
        rt = transfer_function([1.0, 1.0], [1.0])
        h = impulse_response(rt, ts)
        n = np.arange(0, 8)
        np.testing.assert_allclose(h.values[2:10].real, 2.0 ** -(n + 1), rtol=1e-13)

    def test_integrator_is_unit_step(self, rng):
        ts = random_scale(rng, 10, t0_index=2)
        rt = transfer_function([0.0, 1.0], [1.0])
        h = impulse_response(rt, ts)
        step = unit_step(ts, "causal")
        np.testing.assert_allclose(
            h.values[: len(ts) - 1], step.values[: len(ts) - 1], atol=1e-13
        )

    def test_improper_rejected(self):
        rt = transfer_function([1.0, 1.0], [0.0, 1.0])  # M == N
        with pytest.raises(ImproperRational):
            impulse_response(rt, uniform_grid(1.0, -1, 5))


class TestSimulate:
    def test_first_order_hand_recursion(self):
        h, a = 1.0, 1.0
        ts = uniform_grid(h, -2, 12)
        x = impulse(ts)
        y = simulate([a, 1.0], [1.0], x)
        n = np.arange(0, 10)
        np.testing.assert_allclose(
            y.values[2:12].real, (1 + a * h) ** -(n + 1), rtol=1e-13
        )

    def test_zero_input_zero_state(self, rng):
        ts = random_scale(rng, 10, t0_index=2)
        x = as_signal(ts, np.zeros(10))
        y = simulate([0.7, 1.0], [1.0], x)
        np.testing.assert_array_equal(y.values, np.zeros(10))

    def test_singular_step(self):
        ts = build_time_scale([0.0, 1.0, 1.5, 2.5, 4.0], 1)
        x = impulse(ts)
        bad_a = [-1.0 / ts.steps[2], 1.0]  # reciprocal of one step is a root
        with pytest.raises(SingularStep):
            simulate(bad_a, [1.0], x)

    def test_needs_history(self, rng):
        ts = uniform_grid(1.0, 0, 8)  # t0 at the left edge
        x = impulse(ts)
        with pytest.raises(WindowTooSmall):
            simulate([1.0, 2.0, 1.0], [1.0], x)

    def test_matches_catalog_on_random_scales(self, rng):
        for _ in range(10):
            den, num = random_stable_system(rng)
            n_order = den.size - 1
            ts = random_scale(rng, 40, 0.1, 1.0, t0_index=n_order)
            x = impulse(ts)
            y = simulate(den, num, x)
            rt = transfer_function(den, num)
            h = impulse_response(rt, ts)
            lo, hi = y.support
            err = np.max(np.abs(y.values[lo: hi + 1] - h.values[lo: hi + 1]))
            assert err < 1e-10

    def test_summary(self, rng):
        ts = uniform_grid(1.0, -2, 10)
        y, summary = simulate([1.0, 1.0], [1.0], impulse(ts), with_summary=True)
        assert summary.steps == len(ts) - 1 - ts.t0_index
        assert 0 < summary.singular_margin <= 1


class TestShiftFactor:
    def test_reference_instant_is_one(self, rng):
        ts = random_scale(rng, 8)
        assert shifted_transform_factor(ts, ts.t0_index, 0.7 + 0.1j) == 1.0

    def test_two_steps_right_on_unit_grid(self):
        ts = uniform_grid(1.0, -3, 5)
        s = 0.37 + 0.21j
        fac = shifted_transform_factor(ts, ts.t0_index + 2, s)
        assert fac == pytest.approx((1 - s) ** 2, rel=1e-14)

    def test_factor_times_transform_equals_shifted_series(self, rng):
        h = 0.5
        ts = uniform_grid(h, -4, 16)
        t0i = ts.t0_index
        f = random_signal(rng, ts, t0i + 1, t0i + 6)
        shift = 3
        shifted_vals = np.zeros(len(ts), dtype=complex)
        shifted_vals[shift:] = f.values[:-shift]
        g = as_signal(ts, shifted_vals, (f.support[0] + shift, f.support[1] + shift))
        for _ in range(5):
            s = complex(rng.uniform(-0.6, 0.6), rng.uniform(0.2, 1.2))
            lhs = direct_transform(g, s)
            rhs = shifted_transform_factor(ts, t0i + shift, s) * direct_transform(f, s)
            assert lhs == pytest.approx(rhs, rel=1e-10)


class TestInterpolate:
    def test_on_grid_target_returns_sample(self, rng):
        ts = uniform_grid(0.5, -3, 12)
        f = random_signal(rng, ts, 4, 10)
        t0i = ts.t0_index
        for k in (0, 2, 5):
            v = interpolate(f, 0.5 * k)
            assert v == pytest.approx(complex(f.values[t0i + k]), abs=1e-9)

    def test_zero_signal(self, rng):
        ts = uniform_grid(0.5, -3, 8)
        f = as_signal(ts, np.zeros(len(ts)))
        assert abs(interpolate(f, 0.5)) < 1e-12

    def test_constant_recovered_between_grids(self):
        inst = [-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 3.5]
        ts = build_time_scale(inst, 2)
        vals = np.zeros(len(ts), dtype=complex)
        vals[1:8] = 2.5
        f = as_signal(ts, vals, (1, 7))
        v = interpolate(f, 2.5)  # between the 2.0 and 3.0 samples
        assert v == pytest.approx(2.5, rel=1e-6)

    def test_off_super_scale_rejected(self, rng):
        ts = uniform_grid(0.5, -3, 8)
        f = random_signal(rng, ts, 3, 6)
        with pytest.raises(TargetOffSuperScale):
            interpolate(f, 0.21)

    def test_uniform_shift_matches_series_oracle(self, rng):
        # value at t_n - t_m equals the grid sample of the shifted signal
        h = 0.5
        ts = uniform_grid(h, -6, 14)
        t0i = ts.t0_index
        f = random_signal(rng, ts, t0i + 1, t0i + 5)
        target = -2 * h  # f(t - 2h) reference change
        v = interpolate(f, target)
        assert v == pytest.approx(complex(f.values[t0i - 2]), abs=1e-8)


class TestConvolve:
    def test_impulse_identity_arbitrary_scale(self, rng):
        # exact up to the two weight multiplications mu * (1/mu) * f
        for _ in range(5):
            ts = random_scale(rng, 14, t0_index=3)
            f = random_signal(rng, ts, 4, 9)
            d = impulse(ts)
            np.testing.assert_allclose(convolve(f, d).values, f.values, rtol=1e-15, atol=0)
            np.testing.assert_allclose(convolve(d, f).values, f.values, rtol=1e-15, atol=0)

    def test_impulse_identity_bitwise_on_pow2_grid(self, rng):
        # power-of-two steps make mu * (1/mu) == 1 exactly
        ts = uniform_grid(0.5, -3, 10)
        f = random_signal(rng, ts, 4, 9)
        d = impulse(ts)
        assert np.array_equal(convolve(f, d).values, f.values)
        assert np.array_equal(convolve(d, f).values, f.values)

    def test_uniform_matches_classical_conv_times_h(self, rng):
        h = 0.4
        ts = uniform_grid(h, -4, 16)
        t0i = ts.t0_index
        f = random_signal(rng, ts, t0i, t0i + 4)
        g = random_signal(rng, ts, t0i, t0i + 3)
        c = convolve(f, g)
        oracle = np.zeros(len(ts), dtype=complex)
        for m in range(len(ts)):
            for j in range(len(ts)):
                k = m + j - t0i
                if 0 <= k < len(ts):
                    oracle[k] += h * f.values[m] * g.values[j]
        np.testing.assert_allclose(c.values, oracle, atol=1e-14)

    def test_transform_product_on_uniform_grid(self, rng):
        ts = uniform_grid(0.5, -4, 18)
        t0i = ts.t0_index
        f = random_signal(rng, ts, t0i, t0i + 4)
        g = random_signal(rng, ts, t0i + 1, t0i + 5)
        c = convolve(f, g)
        for _ in range(5):
            s = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.2, 1.0))
            lhs = direct_transform(c, s)
            rhs = direct_transform(f, s) * direct_transform(g, s)
            assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)

    def test_commutative_and_associative_on_uniform(self, rng):
        ts = uniform_grid(1.0, -3, 20)
        t0i = ts.t0_index
        f = random_signal(rng, ts, t0i, t0i + 3)
        g = random_signal(rng, ts, t0i, t0i + 2)
        w = random_signal(rng, ts, t0i, t0i + 2)
        np.testing.assert_allclose(
            convolve(f, g).values, convolve(g, f).values, atol=1e-13
        )
        np.testing.assert_allclose(
            convolve(convolve(f, g), w).values,
            convolve(f, convolve(g, w)).values,
            atol=1e-12,
        )

    def test_scale_mismatch(self, rng):
        a = uniform_grid(1.0, -2, 6)
        b = uniform_grid(1.0, -1, 7)
        with pytest.raises(ScaleMismatch):
            convolve(random_signal(rng, a, 2, 4), random_signal(rng, b, 2, 4))

    def test_non_closed_grid_needs_opt_in(self, rng):
        ts = random_scale(rng, 12, t0_index=2)
        f = random_signal(rng, ts, 3, 6)
        g = random_signal(rng, ts, 4, 7)
        with pytest.raises(ScaleMismatch):
            convolve(f, g)

    def test_interpolating_path_keeps_transform_product(self, rng):
        steps = rng.uniform(0.3, 1.2, 19)
        ts = make_scale(steps, 2)
        f = random_signal(rng, ts, 3, 5)
        g = random_signal(rng, ts, 2, 4)
        c = convolve(f, g, allow_interpolation=True)
        for _ in range(4):
            s = complex(rng.uniform(-0.4, 0.4), rng.uniform(0.3, 1.0))
            lhs = direct_transform(c, s)
            rhs = direct_transform(f, s) * direct_transform(g, s)
            assert lhs == pytest.approx(rhs, rel=1e-7, abs=1e-9)


class TestCorrelate:
    def test_impulse_autocorrelation(self, rng):
        ts = uniform_grid(0.5, -4, 4)
        d = impulse(ts)
        c = correlate(d, d)
        expected = np.zeros(len(ts), dtype=complex)
        expected[ts.t0_index] = 1.0 / 0.5  # mu(t0) * (1/mu)^2
        np.testing.assert_allclose(c.values, expected, atol=1e-14)

    def test_uniform_matches_classical_correlation(self, rng):
        h = 0.5
        ts = uniform_grid(h, -8, 8)
        t0i = ts.t0_index
        f = random_signal(rng, ts, t0i, t0i + 4)
        g = random_signal(rng, ts, t0i, t0i + 3)
        c = correlate(f, g)
        oracle = np.zeros(len(ts), dtype=complex)
        for ni in range(len(ts)):
            lag = ni - t0i
            for m in range(len(ts)):
                j = m - lag
                if 0 <= j < len(ts):
                    oracle[ni] += h * f.values[m] * g.values[j]
        np.testing.assert_allclose(c.values, oracle, atol=1e-13)

    def test_transform_identity(self, rng):
        h = 0.5
        ts = uniform_grid(h, -8, 10)
        t0i = ts.t0_index
        f = random_signal(rng, ts, t0i, t0i + 4)
        g = random_signal(rng, ts, t0i, t0i + 3)
        c = correlate(f, g)
        for _ in range(5):
            s = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.2, 1.0))
            lhs = direct_transform(c, s)
            rhs = direct_transform(f, s) * direct_transform(g, -s, "delta")
            assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)

    def test_reflection_off_grid(self, rng):
        ts = build_time_scale([0.0, 0.5, 1.0, 1.7, 2.0], 1)
        g_vals = np.zeros(5, dtype=complex)
        g_vals[3] = 1.0  # t = 1.7 reflects to -0.7, not on the grid
        g = as_signal(ts, g_vals, (3, 3))
        f = random_signal(rng, ts, 1, 2)
        with pytest.raises(ReflectionOffGrid):
            correlate(f, g)


class TestResample:
    def test_identity_on_uniform_grid(self, rng):
        h = 0.5
        ts = uniform_grid(h, -3, 12)
        f = random_signal(rng, ts, 4, 10)
        r = resample_uniform(f, h)
        np.testing.assert_allclose(r.scale.instants, ts.instants, atol=1e-12)
        assert np.max(np.abs(r.values - f.values)) < 1e-8

    def test_constant_on_half_grid_subset(self):
        inst = [-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 3.5]
        ts = build_time_scale(inst, 2)
        vals = np.zeros(len(ts), dtype=complex)
        vals[1:8] = 1.5
        f = as_signal(ts, vals, (1, 7))
        r = resample_uniform(f, 0.5)
        # inside the original support span the constant must survive
        inner = (r.scale.instants >= 0.0) & (r.scale.instants <= 2.5)
        np.testing.assert_allclose(r.values[inner].real, 1.5, atol=1e-6)

    def test_nonpositive_step_rejected(self, rng):
        ts = uniform_grid(0.5, -3, 6)
        f = random_signal(rng, ts, 2, 4)
        with pytest.raises(IncompatibleStep):
            resample_uniform(f, 0.0)
        with pytest.raises(IncompatibleStep):
            resample_uniform(f, -0.5)

    def test_incompatible_step_rejected(self, rng):
        ts = uniform_grid(0.5, -3, 8)
        f = random_signal(rng, ts, 3, 6)
        with pytest.raises(IncompatibleStep):
            resample_uniform(f, 0.3)


class TestFinalValue:
    def test_running_sum_limit_matches_transform_at_zero(self, rng):
        h = 0.5
        ts = uniform_grid(h, -2, 20)
        t0i = ts.t0_index
        g = random_signal(rng, ts, t0i, t0i + 10)
        total = np.sum(h * g.values[t0i: t0i + 11])
        near_zero = direct_transform(g, 1e-9)
        assert abs(near_zero - total) <= 1e-6 * abs(total)
