"""
Tests for the EB purifications, channel/detector models and key-rate terms
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from sqzkey.errors import DegenerateModulationError, InvalidArgumentError
from sqzkey.gaussian import condition_homodyne, direct_sum, symplectic_eigenvalues, thermal_state, vacuum_state, von_neumann_entropy
from sqzkey.models import ChannelParams, DetectorParams, ProtocolKind, ProtocolParams, SourceParams
from sqzkey.protocol import (
    SIGNAL_MODE,
    apply_channel,
    apply_detector,
    apply_heterodyne_split,
    asymptotic_key_rate,
    build_coherent_eb_state,
    build_eb_state,
    build_squeezed_eb_state,
    conditional_signal_state,
    detection_to_input_noise,
    holevo_bound,
    input_to_detection_noise,
    input_to_output_noise,
    mutual_information,
    output_to_input_noise,
    receiver_covariance,
    three_squeezer_variances,
    trusted_state,
)

from conftest import DETECTOR, coherent, squeezed

SOURCES = [
    SourceParams.squeezed(0.417, 3.029, 1.372),
    SourceParams.squeezed(0.5, 0.0, 5.0),
    SourceParams.squeezed(0.25, 1.0, 0.3),
]

_DRAW = np.random.Generator(np.random.Philox(2026))
RANDOM_SOURCES = [
    SourceParams.squeezed(float(_DRAW.uniform(0.1, 0.95)), float(_DRAW.uniform(0.0, 5.0)), float(_DRAW.uniform(0.05, 10.0)))
    for _ in range(200)
]
IDEAL_LINKS = [
    squeezed(float(_DRAW.uniform(0.2, 0.9)), float(_DRAW.uniform(0.0, 3.0)), float(_DRAW.uniform(0.2, 5.0)), 1.0, 0.0, 0.0, detector=DetectorParams())
    for _ in range(10)
] + [coherent(float(_DRAW.uniform(0.2, 5.0)), 1.0, 0.0, 0.0, detector=DetectorParams()) for _ in range(10)]


class TestSourceParams:
    def test_coherent_forces_vacuum_source(self):
        src = SourceParams(protocol=ProtocolKind.COHERENT, v_sqz=0.3, delta_v_an=2.0, v_m=1.0)
        assert (src.v_sqz, src.delta_v_an) == (1.0, 0.0)

    def test_antisqueezed_variance(self):
        assert SourceParams.squeezed(0.5, 3.0, 1.0).v_antisqz == pytest.approx(5.0)

    def test_rejects_non_positive_squeezing(self):
        with pytest.raises(ValidationError):
            SourceParams.squeezed(0.0, 0.0, 1.0)

    def test_detector_from_noise(self):
        det = DetectorParams.from_noise(0.68, 0.07)
        assert det.t == pytest.approx(0.07)
        assert det.v_d == pytest.approx(1.0 + 0.07 / 0.32)
        assert det.t_output == pytest.approx(0.035)

    def test_attenuation(self):
        assert ChannelParams.from_attenuation_db(10.0).eta == pytest.approx(0.1)


class TestSqueezedPurification:
    def test_squeezer_variances_zero_modulation(self):
        with pytest.raises(DegenerateModulationError):
            three_squeezer_variances(0.5, 0.0)

    @pytest.mark.parametrize("src", SOURCES)
    def test_signal_marginal(self, src):
        gamma = build_squeezed_eb_state(src)
        assert gamma.n_modes == 4
        v_x, v_p = gamma.variances(SIGNAL_MODE)
        assert v_x == pytest.approx(src.v_m + src.v_sqz, rel=1e-9)
        assert v_p == pytest.approx(src.v_m + src.v_antisqz, rel=1e-9)

    @pytest.mark.parametrize("src", SOURCES)
    def test_conditional_state_is_prepared_state(self, src):
        cond = conditional_signal_state(build_squeezed_eb_state(src))
        assert np.allclose(cond.matrix, np.diag([src.v_sqz, src.v_antisqz]), atol=1e-9)

    @pytest.mark.parametrize("src", SOURCES)
    def test_global_state_is_pure(self, src):
        nu = symplectic_eigenvalues(build_squeezed_eb_state(src))
        assert np.allclose(nu, 1.0, atol=1e-8)

    def test_random_sources_are_purified(self):
        for src in RANDOM_SOURCES:
            gamma = build_squeezed_eb_state(src)
            assert np.max(np.abs(symplectic_eigenvalues(gamma) - 1.0)) < 1e-8
            cond = conditional_signal_state(gamma)
            np.testing.assert_allclose(cond.matrix, np.diag([src.v_sqz, src.v_antisqz]), rtol=0.0, atol=1e-8)

    def test_unmodulated_state(self):
        src = SourceParams.squeezed(0.4, 2.0, 0.0)
        gamma = build_eb_state(src)
        assert gamma.variances(SIGNAL_MODE) == pytest.approx((0.4, 2.5 + 2.0))

    def test_rejects_coherent_source(self):
        with pytest.raises(InvalidArgumentError):
            build_squeezed_eb_state(SourceParams.coherent(1.0))

    def test_coherent_tmsv(self):
        gamma = build_coherent_eb_state(1.5)
        assert gamma.variances(SIGNAL_MODE) == pytest.approx((2.5, 2.5))
        assert build_eb_state(SourceParams.coherent(1.5)).allclose(gamma)


class TestChannelAndDetector:
    def test_channel_on_vacuum(self):
        out = apply_channel(vacuum_state(1), 0, ChannelParams(eta=0.3, eps_x=0.1, eps_p=0.2))
        assert out.variances(0) == pytest.approx((1.03, 1.06))

    def test_channel_scales_correlations(self):
        gamma = build_coherent_eb_state(3.0)
        out = apply_channel(gamma, SIGNAL_MODE, ChannelParams(eta=0.25))
        assert out.matrix[0, 2] == pytest.approx(0.5 * gamma.matrix[0, 2])

    def test_detector_appends_two_modes(self):
        out = apply_detector(vacuum_state(2), 1, DETECTOR)
        assert out.n_modes == 4
        assert out.variances(1)[0] == pytest.approx(0.68 + 0.32 * 1.07)

    def test_heterodyne_split_appends_readout(self):
        out = apply_heterodyne_split(direct_sum(vacuum_state(1), thermal_state(3.0)), 1)
        assert out.n_modes == 3
        assert out.variances(1) == pytest.approx((2.0, 2.0))
        assert out.variances(2) == pytest.approx((2.0, 2.0))

    def test_mode_out_of_range(self):
        with pytest.raises(InvalidArgumentError):
            apply_channel(vacuum_state(1), 1, ChannelParams(eta=0.5))

    @pytest.mark.parametrize(
        "params",
        [
            squeezed(0.417, 3.029, 1.372, 0.166, 0.041, 0.037),
            coherent(1.461, 0.276, 0.057, 0.061),
        ],
    )
    def test_receiver_covariance_matches_trusted_state(self, params):
        cov = receiver_covariance(params)
        gamma = trusted_state(params, symmetrize=False)
        assert gamma.variances(SIGNAL_MODE)[0] == pytest.approx(cov[2, 2], rel=1e-12)
        assert gamma.variances(gamma.n_modes - 1)[1] == pytest.approx(cov[3, 3], rel=1e-12)

    def test_noise_converters(self):
        assert input_to_output_noise(0.05, 0.2) == pytest.approx(0.01)
        assert output_to_input_noise(0.01, 0.2) == pytest.approx(0.05)
        u = input_to_detection_noise(0.05, 0.2, 0.68)
        assert u == pytest.approx(0.0034)
        assert detection_to_input_noise(u, 0.2, 0.68) == pytest.approx(0.05)

    def test_converter_domain(self):
        with pytest.raises(InvalidArgumentError):
            output_to_input_noise(0.01, 0.0)


class TestKeyRateTerms:
    def test_mutual_information_squeezed(self, squeezed_50km):
        assert mutual_information(squeezed_50km) == pytest.approx(0.054825, rel=2e-3)

    def test_coherent_counts_both_quadratures(self):
        params = coherent(1.372, 0.163, 0.03, 0.03)
        cov = receiver_covariance(params)
        single = 0.5 * math.log2(cov[2, 2] / (cov[2, 2] - cov[0, 2] ** 2 / 1.372))
        assert mutual_information(params) == pytest.approx(2.0 * single)

    def test_no_modulation_no_information(self):
        params = squeezed(0.5, 1.0, 0.0, 0.5, 0.01, 0.01)
        assert mutual_information(params) == 0.0

    @pytest.mark.parametrize("kind", ["squeezed", "coherent"])
    def test_conditioning_order_is_irrelevant(self, kind, squeezed_50km, coherent_50km):
        params = squeezed_50km if kind == "squeezed" else coherent_50km
        gamma = trusted_state(params)
        last = gamma.n_modes - 1
        p_first = condition_homodyne(condition_homodyne(gamma, last, "p"), SIGNAL_MODE, "x")
        x_first = condition_homodyne(condition_homodyne(gamma, SIGNAL_MODE, "x"), last - 1, "p")
        np.testing.assert_allclose(p_first.matrix, x_first.matrix, atol=1e-9)

    def test_squeezing_raises_information(self, squeezed_50km):
        vacuum_like = ProtocolParams(
            source=SourceParams.squeezed(1.0, 0.0, 1.372),
            channel=squeezed_50km.channel,
            detector=squeezed_50km.detector,
        )
        assert mutual_information(squeezed_50km) > mutual_information(vacuum_like)

    @pytest.mark.parametrize("kind", ["squeezed", "coherent"])
    def test_ideal_channel_leaks_nothing(self, kind):
        ideal = DetectorParams()
        if kind == "squeezed":
            params = squeezed(0.5, 0.0, 2.0, 1.0, 0.0, 0.0, detector=ideal)
        else:
            params = coherent(2.0, 1.0, 0.0, 0.0, detector=ideal)
        assert holevo_bound(params) == pytest.approx(0.0, abs=1e-7)

    @pytest.mark.parametrize("params", IDEAL_LINKS)
    def test_random_ideal_links_leak_nothing(self, params):
        assert holevo_bound(params) <= 1e-9
        assert holevo_bound(params, symmetrize=False) <= 1e-9

    def test_holevo_grows_with_noise(self):
        quiet = holevo_bound(squeezed(0.416, 2.714, 1.461, 0.3, 0.01, 0.01))
        noisy = holevo_bound(squeezed(0.416, 2.714, 1.461, 0.3, 0.1, 0.1))
        assert noisy > quiet > 0.0

    def test_symmetrization_is_conservative(self, squeezed_30km):
        assert holevo_bound(squeezed_30km, symmetrize=True) >= holevo_bound(squeezed_30km, symmetrize=False)

    def test_asymptotic_rate(self, squeezed_30km):
        expected = 0.92 * mutual_information(squeezed_30km) - holevo_bound(squeezed_30km)
        assert asymptotic_key_rate(squeezed_30km, 0.92) == pytest.approx(max(expected, 0.0))

    def test_asymptotic_rate_clips_at_zero(self):
        assert asymptotic_key_rate(coherent(1.0, 0.1, 0.5, 0.5), 0.9) == 0.0

    def test_trusted_state_entropy_finite(self, coherent_30km):
        assert von_neumann_entropy(trusted_state(coherent_30km)) > 0.0

