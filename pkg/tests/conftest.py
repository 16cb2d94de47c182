"""
Shared operating points for the sqzkey tests
"""

import numpy as np
import pytest

from sqzkey.models import (
    ChannelParams,
    DetectorParams,
    EstimatorBudget,
    PenaltyConfig,
    ProtocolParams,
    ReconciliationConfig,
    SourceParams,
)

DETECTOR = DetectorParams(tau=0.68, v_d=1.07)
N_CODE = 819_200
K_INFO = 16_384


def squeezed(v_sqz, delta_v_an, v_m, eta, eps_x, eps_p, detector=DETECTOR) -> ProtocolParams:
    return ProtocolParams(
        source=SourceParams.squeezed(v_sqz, delta_v_an, v_m),
        channel=ChannelParams(eta=eta, eps_x=eps_x, eps_p=eps_p),
        detector=detector,
    )


def coherent(v_m, eta, eps_x, eps_p, detector=DETECTOR) -> ProtocolParams:
    return ProtocolParams(
        source=SourceParams.coherent(v_m),
        channel=ChannelParams(eta=eta, eps_x=eps_x, eps_p=eps_p),
        detector=detector,
    )


@pytest.fixture
def budget() -> EstimatorBudget:
    return EstimatorBudget(n=100_000_000, z=6.5)


@pytest.fixture
def penalty() -> PenaltyConfig:
    return PenaltyConfig(d=1, eps_smooth=1e-10)


@pytest.fixture
def squeezed_50km() -> ProtocolParams:
    return squeezed(0.417, 3.029, 1.372, 0.166, 0.041, 0.037)


@pytest.fixture
def coherent_50km() -> ProtocolParams:
    return coherent(1.372, 0.163, 0.032, 0.031)


@pytest.fixture
def squeezed_30km() -> ProtocolParams:
    return squeezed(0.416, 2.714, 1.461, 0.291, 0.017, 0.063)


@pytest.fixture
def coherent_30km() -> ProtocolParams:
    return coherent(1.461, 0.276, 0.057, 0.061)


@pytest.fixture
def recon_factory():
    def make(puncture: int, measured_mi=None, **kwargs) -> ReconciliationConfig:
        return ReconciliationConfig(n_code=N_CODE, k=K_INFO, puncture=puncture, measured_mi=measured_mi, **kwargs)

    return make


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.Generator(np.random.Philox(1234))
