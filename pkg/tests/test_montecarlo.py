"""Sample-based estimates against the closed forms."""

import numpy as np
import pytest

from cvteleport.channel import budget_to_channel, ideal_budget, shot_noise_budget
from cvteleport.epr import EprScenario
from cvteleport.errors import ConfigError, DegenerateConditioningError
from cvteleport.gaussian import GaussianVector, sample
from cvteleport.montecarlo import (
    McRunConfig,
    estimate_conditional_variance,
    simulate_protocol,
)


class TestRunConfig:
    def test_minimum_sample_count(self):
        with pytest.raises(ConfigError, match=">= 1000"):
            McRunConfig(channel=EprScenario(0.7, 0.3), samples=10, seed=1)

    def test_samples_must_split_into_blocks(self):
        with pytest.raises(ConfigError, match="multiple"):
            McRunConfig(channel=EprScenario(0.7, 0.3), samples=1050, seed=1)

    def test_samples_must_be_integer(self):
        with pytest.raises(ConfigError):
            McRunConfig(channel=EprScenario(0.7, 0.3), samples=1e5, seed=1)


class TestConditionalVarianceEstimator:
    def test_constant_conditioner_returns_plain_variance(self):
        rng = np.random.default_rng(0)
        a = rng.normal(0.0, np.sqrt(2.0), 10000)
        b = np.full(10000, 3.0)
        got = estimate_conditional_variance(a, b)
        assert got == pytest.approx(a.var(), abs=1e-12)

    def test_identical_samples_leave_no_residual(self):
        rng = np.random.default_rng(1)
        a = rng.normal(size=5000)
        assert estimate_conditional_variance(a, a) == pytest.approx(0.0, abs=1e-9)

    def test_matches_population_value(self):
        cov = np.array([[2.0, 1.0], [1.0, 2.0]])
        state = GaussianVector(("A", "B"), np.zeros(2), cov)
        draws = sample(state, 1000000, seed=12)
        got = estimate_conditional_variance(draws[:, 0], draws[:, 1])
        # population residual is 2 - 1/2; stderr ~ sqrt(2/n)*1.5
        assert got == pytest.approx(1.5, abs=5.0 * 1.5 * np.sqrt(2.0 / 1e6))

    def test_mismatched_lengths_rejected(self):
        with pytest.raises(ValueError, match="equal length"):
            estimate_conditional_variance(np.zeros(2000), np.zeros(3000))

    def test_short_arrays_rejected(self):
        with pytest.raises(ValueError, match="at least"):
            estimate_conditional_variance(np.zeros(10), np.zeros(10))

    def test_degenerate_combination_rejected(self):
        # conditioner variance underflows to zero while the covariance does not
        a = np.linspace(-1.0, 1.0, 2000)
        b = 1e-200 * a
        with pytest.raises(DegenerateConditioningError):
            estimate_conditional_variance(a, b)
        # the plain constant case stays fine
        got = estimate_conditional_variance(a, np.zeros(2000))
        assert got == pytest.approx(a.var(), abs=1e-12)


class TestSimulateProtocol:
    def test_ideal_channel_estimates_exactly(self):
        run = McRunConfig(
            channel=budget_to_channel(ideal_budget()),
            samples=100000,
            seed=4,
            input_amplitude=(2.5, -1.0),
        )
        report = simulate_protocol(run)
        assert report.fidelity.estimate == 1.0
        assert report.fidelity.z_score == 0.0
        assert report.N_X.estimate == 0.0
        assert report.N_X.z_score == 0.0
        assert report.max_abs_z == 0.0

    def test_shot_noise_channel(self):
        run = McRunConfig(
            channel=budget_to_channel(shot_noise_budget()), samples=1000000, seed=21
        )
        report = simulate_protocol(run)
        assert abs(report.N_X.estimate - 2.0) <= 3.0 * report.N_X.stderr
        assert abs(report.fidelity.estimate - 0.5) <= 3.0 * report.fidelity.stderr
        assert report.fidelity.analytic == 0.5

    def test_epr_scenario_fidelity(self):
        run = McRunConfig(channel=EprScenario(0.7, 0.3), samples=1000000, seed=35)
        report = simulate_protocol(run)
        assert report.fidelity.analytic == pytest.approx(1.0 / 1.51, abs=1e-12)
        assert abs(report.fidelity.estimate - 1.0 / 1.51) <= 3.0 * report.fidelity.stderr
        assert report.cv_product_r_given_m.analytic < 1.0

    def test_reports_are_bit_identical_for_fixed_seed(self):
        run = McRunConfig(channel=EprScenario(0.9, 0.5), samples=10000, seed=123)
        assert simulate_protocol(run) == simulate_protocol(run)

    def test_different_seeds_differ(self):
        a = McRunConfig(channel=EprScenario(0.9, 0.5), samples=10000, seed=1)
        b = McRunConfig(channel=EprScenario(0.9, 0.5), samples=10000, seed=2)
        assert simulate_protocol(a) != simulate_protocol(b)

    def test_amplitude_does_not_bias_fidelity(self):
        # unity gain: the overlap depends only on the added noise
        base = McRunConfig(channel=EprScenario(0.7, 0.3), samples=50000, seed=9)
        moved = McRunConfig(
            channel=EprScenario(0.7, 0.3),
            samples=50000,
            seed=9,
            input_amplitude=(4.0, 4.0),
        )
        f0 = simulate_protocol(base).fidelity.estimate
        f1 = simulate_protocol(moved).fidelity.estimate
        assert f0 == pytest.approx(f1, abs=1e-9)

    def test_estimates_within_gate_across_seeds(self):
        for seed in (1, 2, 3):
            run = McRunConfig(channel=EprScenario(0.8, 0.4), samples=100000, seed=seed)
            assert simulate_protocol(run).max_abs_z < 5.0

    def test_fidelity_estimate_bounded(self):
        run = McRunConfig(channel=EprScenario(0.3, 0.9), samples=20000, seed=2)
        report = simulate_protocol(run)
        assert 0.0 < report.fidelity.estimate <= 1.0

    def test_stderr_positive_for_noisy_channels(self):
        run = McRunConfig(channel=EprScenario(0.7, 0.3), samples=10000, seed=6)
        report = simulate_protocol(run)
        for comparison in report.comparisons.values():
            assert comparison.stderr > 0.0
