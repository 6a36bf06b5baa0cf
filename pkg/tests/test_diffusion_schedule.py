"""Noise schedule invariants and the closed-form forward noising oracle."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from graspsynth.diffusion import NoiseSchedule, forward_noise, linear_schedule


class TestLinearSchedule:
    @pytest.mark.parametrize("steps", [100, 500, 1000])
    def test_presets(self, steps):
        s = linear_schedule(steps)
        assert s.steps == steps
        assert s.betas[0] == pytest.approx(1e-4)
        assert s.betas[-1] == pytest.approx(2e-2)

    def test_betas_nondecreasing_in_unit_interval(self):
        s = linear_schedule(1000)
        assert np.all(np.diff(s.betas) >= 0.0)
        assert np.all((s.betas > 0.0) & (s.betas < 1.0))

    def test_alpha_bars_strictly_decreasing(self):
        s = linear_schedule(500)
        assert np.all(np.diff(s.alpha_bars) < 0.0)

    def test_alpha_bar_is_cumulative_product(self):
        s = linear_schedule(250)
        np.testing.assert_allclose(s.alpha_bars, np.cumprod(1.0 - s.betas), rtol=1e-12)

    def test_single_step_schedule(self):
        s = linear_schedule(1)
        assert s.betas[0] == pytest.approx(2e-2)

    def test_accessors_are_one_indexed(self):
        s = linear_schedule(10)
        assert s.beta(1) == pytest.approx(s.betas[0])
        assert s.alpha(10) == pytest.approx(1.0 - s.betas[9])
        assert s.alpha_bar(10) == pytest.approx(np.prod(1.0 - s.betas))

    @pytest.mark.parametrize("t", [0, 11, -3])
    def test_step_index_out_of_range(self, t):
        s = linear_schedule(10)
        with pytest.raises(ValueError, match="outside"):
            s.beta(t)

    def test_rejects_decreasing_betas(self):
        with pytest.raises(ValueError):
            NoiseSchedule(betas=np.array([0.02, 0.01]))

    def test_rejects_out_of_range_betas(self):
        with pytest.raises(ValueError):
            NoiseSchedule(betas=np.array([0.0, 0.1]))

    def test_read_only(self):
        s = linear_schedule(10)
        with pytest.raises(ValueError):
            s.betas[0] = 0.5


class TestForwardNoise:
    def test_identity_in_zero_beta_limit(self):
        # beta -> 0 makes alpha_bar -> 1: the pose passes through unchanged
        s = NoiseSchedule(betas=np.array([1e-12]))
        h0 = np.arange(27, dtype=np.float64)
        noise = np.ones(27)
        out = forward_noise(s, h0, 1, noise)
        np.testing.assert_allclose(out, h0, atol=1e-5)

    def test_closed_form_at_alpha_bar_064(self):
        # alpha_bar = 0.64, h0 = 0, noise = e1: output = sqrt(0.36) e1 = 0.6 e1
        s = NoiseSchedule(betas=np.array([0.36]))
        assert s.alpha_bar(1) == pytest.approx(0.64)
        e1 = np.zeros(27)
        e1[0] = 1.0
        out = forward_noise(s, np.zeros(27), 1, e1)
        np.testing.assert_allclose(out, 0.6 * e1, rtol=1e-12)

    @given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=1, max_value=100))
    def test_matches_explicit_closed_form(self, seed, t):
        s = linear_schedule(100)
        rng = np.random.default_rng(seed)
        h0 = rng.standard_normal(27)
        noise = rng.standard_normal(27)
        out = forward_noise(s, h0, t, noise)
        ab = s.alpha_bar(t)
        np.testing.assert_allclose(
            out, np.sqrt(ab) * h0 + np.sqrt(1.0 - ab) * noise, rtol=1e-12
        )

    def test_rejects_out_of_range_step(self):
        s = linear_schedule(10)
        with pytest.raises(ValueError, match="outside"):
            forward_noise(s, np.zeros(27), 11, np.zeros(27))

    def test_rejects_shape_mismatch(self):
        s = linear_schedule(10)
        with pytest.raises(ValueError):
            forward_noise(s, np.zeros(27), 5, np.zeros(26))

    def test_closed_form_matches_sequential_moments(self):
        # closed form at step t should match iterating x_s = sqrt(alpha_s) x_{s-1}
        # + sqrt(beta_s) eps_s in mean and variance
        s = linear_schedule(100)
        t = 40
        rng = np.random.default_rng(7)
        h0 = rng.standard_normal(4)
        n = 20000
        seq = np.repeat(h0[None, :], n, axis=0)
        for step in range(1, t + 1):
            eps = rng.standard_normal((n, 4))
            seq = np.sqrt(s.alpha(step)) * seq + np.sqrt(s.beta(step)) * eps
        ab = s.alpha_bar(t)
        se_mean = np.sqrt(1.0 - ab) / np.sqrt(n)
        assert np.all(np.abs(seq.mean(axis=0) - np.sqrt(ab) * h0) < 3.5 * se_mean)
        var = seq.var(axis=0)
        se_var = (1.0 - ab) * np.sqrt(2.0 / (n - 1))
        assert np.all(np.abs(var - (1.0 - ab)) < 3.5 * se_var)
