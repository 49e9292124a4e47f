"""Recovery pipeline tests: plain solves, noise model, regularized solves."""

import math

import numpy as np
import pytest

from oversamp import linalg
from oversamp.kernels import OneChannelParams, TwoChannelParams
from oversamp.recovery import (
    NoiseSpec,
    add_noise,
    recover_derivative_channel,
    recover_function_channel,
    recover_one_channel,
    recover_two_channel,
)
from oversamp.signals import sinc_combination
from oversamp.signals import test_signal_g as signal_g
from oversamp.system import (
    MissingSet,
    known_indices,
    rhs_two_channel,
    two_channel_matrix,
)

OMEGA = math.pi


class TestAddNoise:
    def test_zero_magnitude(self):
        data = np.array([1.0, 2.0, 3.0])
        noisy, delta = add_noise(data, NoiseSpec(magnitude=0.0, seed=4))
        np.testing.assert_array_equal(noisy, data)
        assert delta == 0.0

    def test_deterministic_given_seed(self):
        data = np.zeros(12)
        n1, d1 = add_noise(data, NoiseSpec(magnitude=0.3, seed=77))
        n2, d2 = add_noise(data, NoiseSpec(magnitude=0.3, seed=77))
        np.testing.assert_array_equal(n1, n2)
        assert d1 == d2

    def test_exact_norm_after_rescaling(self):
        data = np.zeros(100)
        noisy, delta = add_noise(data, NoiseSpec(magnitude=1e-2, seed=0))
        assert delta == pytest.approx(0.1, rel=1e-15)
        assert np.linalg.norm(noisy) == pytest.approx(0.1, rel=1e-12)

    def test_rejects_negative_magnitude(self):
        with pytest.raises(ValueError):
            NoiseSpec(magnitude=-0.1)


class TestTwoChannelRecovery:
    def test_zero_signal_recovers_zeros(self):
        p = TwoChannelParams.from_ratio(OMEGA, 0.6)
        u = MissingSet.from_indices([-1, 0, 2])
        res = recover_two_channel(p, u, sinc_combination([], OMEGA), M=50)
        np.testing.assert_array_equal(res.function_values(), np.zeros(3))
        np.testing.assert_array_equal(res.derivative_values(), np.zeros(3))
        assert res.lambda_used == 0.0

    def test_well_conditioned_interleaved_accuracy(self):
        p = TwoChannelParams.from_ratio(OMEGA, 0.7)
        u = MissingSet.interleaved(4, [-1, 0, 1, 2, 3, 4])
        g = signal_g()
        res = recover_two_channel(p, u, g, M=500)
        xs = u.as_array() * p.t_o
        err = np.max(
            np.abs(
                np.concatenate([res.function_values(), res.derivative_values()])
                - np.concatenate([g.value(xs), g.derivative(xs)])
            )
        )
        assert err < 8e-4

    def test_residual_recomputed_from_solution(self):
        p = TwoChannelParams.from_ratio(OMEGA, 0.5)
        u = MissingSet.from_indices([0, 3, 6])
        g = signal_g()
        res = recover_two_channel(p, u, g, M=200)
        S = two_channel_matrix(p, u)
        c = rhs_two_channel(p, u, g, M=200)
        z = np.concatenate([res.function_values(), res.derivative_values()])
        want = float(np.linalg.norm((np.eye(6) - S) @ z - c))
        assert res.residual_norm == pytest.approx(want, abs=1e-12)

    def test_ill_conditioned_warning_without_regularization(self):
        # cond ~ 3e13: solvable in float64 but flagged
        p = TwoChannelParams.from_ratio(OMEGA, 0.6)
        u = MissingSet.from_indices(range(10))
        res = recover_two_channel(p, u, signal_g(), M=500)
        assert any("error amplification" in w for w in res.warnings)
        assert res.condition_estimate > 1e12

    def test_effectively_singular_system_raises(self):
        # cond ~ 1e18 drives a pivot below the near-singularity threshold
        p = TwoChannelParams.from_ratio(OMEGA, 0.9)
        u = MissingSet.from_indices(range(10))
        with pytest.raises(linalg.SingularMatrixError):
            recover_two_channel(p, u, signal_g(), M=500)

    def test_full_solve_consistent_with_reduced_function_channel(self):
        # feeding the reduced solve the derivative values the full solve
        # found must reproduce the full solve's function block exactly
        p = TwoChannelParams.from_ratio(OMEGA, 0.7)
        u = MissingSet.interleaved(4, [-1, 0, 1, 2, 3, 4])
        g = signal_g()
        full = recover_two_channel(p, u, g, M=300)
        reduced = recover_function_channel(
            p, u, g, M=300, derivative_at_missing=full.derivative
        )
        np.testing.assert_allclose(
            reduced.function_values(), full.function_values(), atol=1e-10
        )

    def test_degenerate_unit_ratio_raises(self):
        p = TwoChannelParams.from_ratio(OMEGA, 1.0)
        u = MissingSet.from_indices([0, 1])
        with pytest.raises(linalg.SingularMatrixError):
            recover_two_channel(p, u, signal_g(), M=50)

    def test_consistency_with_computable_truncation_bound(self):
        # truncation bound measured by extending the sums; recovered error
        # must stay within 10 * cond * bound
        rng = np.random.default_rng(31)
        for _ in range(5):
            terms = [(float(rng.uniform(-1, 1)), float(rng.uniform(-3, 3))) for _ in range(3)]
            f = sinc_combination(terms, OMEGA)
            r = float(rng.uniform(0.3, 0.7))
            p = TwoChannelParams.from_ratio(OMEGA, r)
            idx = sorted(set((rng.integers(2, 5, 4).cumsum()).tolist()))
            u = MissingSet.from_indices(idx)
            M = 500
            res = recover_two_channel(p, u, f, M=M)
            tail = float(
                np.linalg.norm(rhs_two_channel(p, u, f, 4 * M) - rhs_two_channel(p, u, f, M))
            )
            xs = u.as_array() * p.t_o
            err = np.max(
                np.abs(
                    np.concatenate([res.function_values(), res.derivative_values()])
                    - np.concatenate([f.value(xs), f.derivative(xs)])
                )
            )
            assert err <= 10.0 * res.condition_estimate * tail


class TestReducedChannels:
    def test_zero_signal_function_channel(self):
        p = TwoChannelParams.from_ratio(OMEGA, 0.6)
        u = MissingSet.from_indices([0, 1, 2])
        res = recover_function_channel(p, u, sinc_combination([], OMEGA), M=50)
        np.testing.assert_array_equal(res.function_values(), np.zeros(3))
        assert res.derivative is None

    def test_zero_signal_derivative_channel(self):
        p = TwoChannelParams.from_ratio(OMEGA, 0.6)
        u = MissingSet.from_indices([0, 1, 2])
        res = recover_derivative_channel(p, u, sinc_combination([], OMEGA), M=50)
        np.testing.assert_array_equal(res.derivative_values(), np.zeros(3))
        assert res.function is None

    def test_function_channel_accuracy_interleaved(self):
        p = TwoChannelParams.from_ratio(OMEGA, 0.7)
        u = MissingSet.interleaved(8, [0, 1, 2, 3])
        g = signal_g()
        res = recover_function_channel(p, u, g, M=500)
        xs = u.as_array() * p.t_o
        assert np.max(np.abs(res.function_values() - g.value(xs))) <= 1e-3

    def test_derivative_channel_accuracy_interleaved(self):
        p = TwoChannelParams.from_ratio(OMEGA, 0.7)
        u = MissingSet.interleaved(8, [0, 1, 2, 3])
        g = signal_g()
        res = recover_derivative_channel(p, u, g, M=500)
        xs = u.as_array() * p.t_o
        assert np.max(np.abs(res.derivative_values() - g.derivative(xs))) <= 1e-3

    def test_unit_ratio_function_channel_fails(self):
        p = TwoChannelParams.from_ratio(OMEGA, 1.0)
        u = MissingSet.from_indices([0, 1, 2])
        with pytest.raises(linalg.SingularMatrixError):
            recover_function_channel(p, u, signal_g(), M=50)

    def test_integer_interleave_derivative_closed_form(self):
        # derivative block collapses to r^2 I, so the solve is componentwise
        r, m = 0.6, 5
        p = TwoChannelParams.from_ratio(OMEGA, r)
        u = MissingSet.interleaved(m, [0, 1, 2])
        g = signal_g()
        res = recover_derivative_channel(p, u, g, M=500)
        S = two_channel_matrix(p, u)
        c = rhs_two_channel(p, u, g, M=500)
        s21 = S[3:, :3]
        b2 = c[3:] + s21 @ g.value(u.as_array() * p.t_o)
        np.testing.assert_allclose(res.derivative_values(), b2 / (1 - r * r), rtol=1e-12)


class TestOneChannelRecovery:
    def test_reference_long_truncation(self):
        p = OneChannelParams.from_ratio(OMEGA, 0.6)
        u = MissingSet.from_indices(range(6))
        res = recover_one_channel(p, u, signal_g(), M=500)
        got = res.function_values()
        assert got[1] == pytest.approx(-0.3096, abs=2e-3)
        assert got[4] == pytest.approx(0.8029, abs=2e-3)

    def test_accepts_sample_mapping(self):
        p = OneChannelParams.from_ratio(OMEGA, 0.6)
        u = MissingSet.from_indices(range(6))
        g = signal_g()
        ks = known_indices(u, 200)
        samples = dict(zip((int(k) for k in ks), g.samples(ks, p.t_o)))
        res_map = recover_one_channel(p, u, samples, M=200)
        res_sig = recover_one_channel(p, u, g, M=200)
        np.testing.assert_allclose(res_map.function_values(), res_sig.function_values(), rtol=1e-14)

    def test_noise_without_regularization_blows_up(self):
        p = OneChannelParams.from_ratio(OMEGA, 0.6)
        u = MissingSet.from_indices(range(-2, 4))
        g = signal_g()
        res = recover_one_channel(p, u, g, M=500, noise=NoiseSpec(magnitude=1e-2, seed=3))
        truth = g.value(u.as_array() * p.t_o)
        rel = np.abs(res.function_values() - truth) / np.abs(truth)
        assert rel.max() > 1.0

    def test_noise_with_regularization_recovers(self):
        p = OneChannelParams.from_ratio(OMEGA, 0.6)
        u = MissingSet.from_indices(range(-2, 4))
        g = signal_g()
        res = recover_one_channel(
            p, u, g, M=500, noise=NoiseSpec(magnitude=1e-2, seed=3), regularize=True
        )
        truth = g.value(u.as_array() * p.t_o)
        err = np.max(np.abs(res.function_values() - truth))
        assert err < 0.5
        assert res.lambda_used > 0.0
        assert res.delta == pytest.approx(1e-2 * math.sqrt(6), rel=1e-12)

    def test_lambda_zero_solution_satisfies_system(self):
        p = OneChannelParams.from_ratio(OMEGA, 0.55)
        u = MissingSet.from_indices([0, 2, 5])
        res = recover_one_channel(p, u, signal_g(), M=300)
        assert res.residual_norm < 1e-10 * max(1.0, np.linalg.norm(res.function_values()))


class TestRegularizationNoHarm:
    def test_regularized_stays_near_plain_solution_when_well_conditioned(self):
        p = TwoChannelParams.from_ratio(OMEGA, 0.7)
        u = MissingSet.interleaved(4, [-1, 0, 1, 2, 3, 4])
        g = signal_g()
        plain = recover_two_channel(p, u, g, M=500)
        delta = 1e-3
        reg = recover_two_channel(p, u, g, M=500, regularize=True, delta=delta)
        S = two_channel_matrix(p, u)
        inv_norm = 1.0 / np.linalg.svd(np.eye(12) - S, compute_uv=False)[-1]
        z_plain = np.concatenate([plain.function_values(), plain.derivative_values()])
        z_reg = np.concatenate([reg.function_values(), reg.derivative_values()])
        assert np.linalg.norm(z_reg - z_plain) <= 1.05 * delta * inv_norm + 1e-12

    def test_regularize_without_delta_uses_truncation_estimate(self):
        p = TwoChannelParams.from_ratio(OMEGA, 0.6)
        u = MissingSet.from_indices(range(-2, 4))
        res = recover_two_channel(p, u, signal_g(), M=500, regularize=True)
        assert res.delta > 0.0
        assert res.lambda_used > 0.0
        # regularized contiguous-case recovery keeps errors of order one
        # instead of the plain solve's order 1e1
        g = signal_g()
        xs = u.as_array() * p.t_o
        err = np.max(np.abs(res.function_values() - g.value(xs)))
        assert err < 1.5
