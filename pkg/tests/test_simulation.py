"""
Tests for the Monte Carlo generator, DSP and the end-to-end pipeline

Frames are kept small; statistical checks use 6 sigma bounds.
"""

import dataclasses
import math

import numpy as np
import pytest

from sqzkey.calibration import estimate_channel
from sqzkey.errors import DegenerateAlignmentError, InvalidArgumentError, RemapError
from sqzkey.models import PenaltyConfig, SourceCalibration
from sqzkey.protocol import receiver_covariance
from sqzkey.security import aep_penalty, excess_noise_estimator_variance, transmittance_estimator_variance
from sqzkey.simulation import (
    B2BCadence,
    PhaseKind,
    PhaseModel,
    SampleFrame,
    SimulationConfig,
    align_quadratures,
    b2b_params,
    end_to_end_run,
    generate_b2b_frame,
    generate_frame,
    remap_alice,
    remap_objective,
    rotate,
)

from conftest import coherent, squeezed

N = 100_000
LINK = squeezed(0.416, 2.714, 1.461, 0.6, 0.02, 0.05)
ALIGNMENT_LINK = squeezed(0.3, 3.0, 1.0, 0.9, 0.01, 0.01)


def within(estimate: float, truth: float, sigma: float, k: float = 6.0) -> bool:
    return abs(estimate - truth) <= k * sigma


class TestGenerator:
    def test_reproducible(self):
        a = generate_frame(LINK, 2000, PhaseModel(), seed=7)
        b = generate_frame(LINK, 2000, PhaseModel(), seed=7)
        c = generate_frame(LINK, 2000, PhaseModel(), seed=8)
        assert np.array_equal(a.bob_x, b.bob_x)
        assert np.array_equal(a.alice_p, b.alice_p)
        assert not np.array_equal(a.bob_x, c.bob_x)

    def test_variances_match_receiver_model(self):
        frame = generate_frame(LINK, N, PhaseModel(), seed=1)
        cov = receiver_covariance(LINK)
        for data, var in ((frame.alice_x, cov[0, 0]), (frame.bob_x, cov[2, 2]), (frame.bob_p, cov[3, 3])):
            assert within(np.var(data, ddof=1), var, var * math.sqrt(2.0 / N))

    def test_cross_covariance(self):
        frame = generate_frame(LINK, N, PhaseModel(), seed=2)
        cov = receiver_covariance(LINK)
        sigma = math.sqrt((cov[0, 0] * cov[2, 2] + cov[0, 2] ** 2) / N)
        assert within(np.cov(frame.alice_x, frame.bob_x)[0, 1], cov[0, 2], sigma)

    def test_truth_records_drawn_phase(self):
        phase = PhaseModel(kind=PhaseKind.FIXED_OFFSET, theta0=None, modulation_offset=None)
        frame = generate_frame(LINK, 2000, phase, seed=3)
        assert abs(frame.truth.theta0) <= phase.theta0_bound
        assert 0.0 <= frame.truth.modulation_offset < 2.0 * math.pi
        assert frame.truth.theta_end == frame.truth.theta0

    def test_random_walk_trajectory(self):
        phase = PhaseModel(kind=PhaseKind.RANDOM_WALK, theta0=0.1, step_std=1e-3)
        frame = generate_frame(LINK, 5000, phase, seed=4)
        assert frame.truth.theta_end != 0.1
        assert abs(frame.truth.theta_end - 0.1) < 6.0 * 1e-3 * math.sqrt(5000)

    def test_truth_holds_no_arrays(self):
        phase = PhaseModel(kind=PhaseKind.RANDOM_WALK, theta0=0.1, step_std=1e-3)
        truth = generate_frame(LINK, 5000, phase, seed=4).truth
        assert all(isinstance(value, float) for value in dataclasses.astuple(truth))

    def test_b2b_frame_has_no_modulation(self):
        frame = generate_b2b_frame(LINK, 2000, seed=5)
        assert np.all(frame.alice_x == 0.0)
        assert b2b_params(LINK).channel.eta == 1.0

    def test_frame_lengths_must_agree(self):
        with pytest.raises(InvalidArgumentError):
            SampleFrame(np.zeros(3), np.zeros(3), np.zeros(2), np.zeros(3))

    def test_rotate_round_trip(self, rng):
        x, p = rng.normal(size=10), rng.normal(size=10)
        back = rotate(*rotate(x, p, 0.7), -0.7)
        assert np.allclose(back[0], x) and np.allclose(back[1], p)


class TestDSP:
    def test_alignment_recovers_phase(self):
        phase = PhaseModel(kind=PhaseKind.FIXED_OFFSET, theta0=0.3, modulation_offset=0.0)
        theta, aligned = align_quadratures(generate_frame(LINK, N, phase, seed=11))
        assert theta == pytest.approx(0.3, abs=0.03)
        assert abs(np.cov(aligned.bob_x, aligned.bob_p)[0, 1]) < 0.02
        assert np.var(aligned.bob_x) < np.var(aligned.bob_p)

    def test_alignment_over_drawn_phases(self):
        phase = PhaseModel(kind=PhaseKind.FIXED_OFFSET, theta0=None, modulation_offset=None)
        for seed in range(100):
            frame = generate_frame(ALIGNMENT_LINK, 400_000, phase, seed=500 + seed)
            assert abs(frame.truth.theta0) <= math.radians(40.0)
            theta, _ = align_quadratures(frame)
            assert abs(math.degrees(theta - frame.truth.theta0)) <= 0.5

    def test_alignment_of_symmetric_ensemble(self):
        frame = generate_frame(coherent(1.461, 0.6, 0.02, 0.02), N, PhaseModel(), seed=12)
        with pytest.raises(DegenerateAlignmentError):
            align_quadratures(frame)

    def test_remap_recovers_offset(self):
        phase = PhaseModel(kind=PhaseKind.NONE, modulation_offset=1.0)
        phi, remapped, c_ab = remap_alice(generate_frame(LINK, N, phase, seed=13))
        assert phi == pytest.approx(1.0, abs=0.03)
        expected = math.sqrt(0.68 * 0.6 / 2.0) * 1.461
        assert c_ab == pytest.approx(expected, rel=0.05)
        assert remap_objective(remapped, 0.0) == pytest.approx(2.0 * c_ab, rel=1e-6)

    def test_remap_is_a_maximum(self):
        phase = PhaseModel(kind=PhaseKind.NONE, modulation_offset=2.0)
        frame = generate_frame(LINK, N, phase, seed=14)
        phi, _, _ = remap_alice(frame)
        assert remap_objective(frame, phi) >= remap_objective(frame, phi + 0.2)
        assert remap_objective(frame, phi) >= remap_objective(frame, phi - 0.2)

    def test_remap_without_correlation(self, rng):
        frame = SampleFrame(*(rng.normal(size=5000) for _ in range(4)))
        with pytest.raises(RemapError):
            remap_alice(frame)

    def test_short_frame(self, rng):
        frame = SampleFrame(*(rng.normal(size=500) for _ in range(4)))
        with pytest.raises(InvalidArgumentError):
            align_quadratures(frame)


class TestEstimatorSpread:
    def test_spread_matches_estimator_variances(self):
        p = squeezed(0.427, 3.119, 1.067, 0.413, 0.072, 0.107)
        cal = SourceCalibration(v_sqz_pure=0.427, delta_v_an=3.119)
        n = 400_000
        estimates = [
            estimate_channel(generate_frame(p, n, PhaseModel(), seed=10_000 + i), cal, p.detector, p.source.v_m)
            for i in range(500)
        ]
        var_x, var_p = excess_noise_estimator_variance(p, n, symmetrize=False)
        expected = {
            "eta": math.sqrt(transmittance_estimator_variance(p, n, symmetrize=False)),
            "eps_x": math.sqrt(var_x),
            "eps_p": math.sqrt(var_p),
        }
        assert expected["eta"] == pytest.approx(0.00272, rel=1e-2)
        assert expected["eps_x"] == pytest.approx(0.01658, rel=1e-2)
        assert expected["eps_p"] == pytest.approx(0.03914, rel=1e-2)
        for name, sigma in expected.items():
            values = [getattr(e, name) for e in estimates]
            assert np.std(values, ddof=1) == pytest.approx(sigma, rel=0.1)
            assert within(np.mean(values), getattr(p.channel, name), sigma / math.sqrt(500))


class TestEndToEnd:
    CONFIG = SimulationConfig(
        phase=PhaseModel(kind=PhaseKind.FIXED_OFFSET, theta0=None, modulation_offset=None),
        b2b_frames=2,
    )

    def test_squeezed_campaign(self):
        result = end_to_end_run(LINK, 3, 20_000, None, seed=42, config=self.CONFIG, beta=0.92)
        assert len(result.frames) == 3
        assert [s.seed for s in result.frames] == [42, 43, 44]
        assert result.estimate.n == 60_000
        eta = next(t for t in result.truth if t.parameter == "eta")
        assert within(eta.estimate, eta.truth, eta.sigma, k=10.0)
        assert result.calibration.v_sqz_pure == pytest.approx(0.416, abs=0.15)
        assert result.report.delta_n == pytest.approx(aep_penalty(60_000, PenaltyConfig()))
        assert result.report.no_key
        assert set(result.spread) == {"eta", "eps_x", "eps_p"}

    def test_campaign_estimates_within_worst_case_deviation(self):
        result = end_to_end_run(LINK, 4, 100_000, None, seed=77, config=self.CONFIG, beta=0.92)
        for t in result.truth[:3]:
            assert t.sigma > 0.0
            assert within(t.estimate, t.truth, t.sigma, k=6.5)

    def test_coherent_campaign_skips_calibration(self):
        p = coherent(1.461, 0.6, 0.02, 0.03)
        result = end_to_end_run(p, 2, 20_000, None, seed=5, config=self.CONFIG, beta=0.92)
        assert result.calibration.is_vacuum
        assert all(s.theta_hat == 0.0 for s in result.frames)
        eta = next(t for t in result.truth if t.parameter == "eta")
        assert within(eta.estimate, eta.truth, eta.sigma, k=10.0)

    def test_per_frame_b2b(self):
        config = self.CONFIG.model_copy(update={"b2b_cadence": B2BCadence.PER_FRAME})
        result = end_to_end_run(LINK, 2, 20_000, None, seed=9, config=config, beta=0.92)
        assert result.calibration.v_sqz_pure == pytest.approx(0.416, abs=0.15)

    def test_workers_do_not_change_results(self):
        one = end_to_end_run(LINK, 3, 5_000, None, seed=3, config=self.CONFIG, beta=0.92, workers=1)
        many = end_to_end_run(LINK, 3, 5_000, None, seed=3, config=self.CONFIG, beta=0.92, workers=3)
        assert one.estimate == many.estimate
        assert one.report == many.report

    def test_keep_frames(self):
        result = end_to_end_run(LINK, 2, 2_000, None, seed=1, config=self.CONFIG, beta=0.92, keep_frames=True)
        assert len(result.sample_frames) == 2

    def test_needs_beta_or_code(self):
        with pytest.raises(InvalidArgumentError):
            end_to_end_run(LINK, 1, 2_000, None, seed=1)
