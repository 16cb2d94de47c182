"""
Symbol-level Monte Carlo generator for prepare-and-measure frames
"""

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from sqzkey.errors import InvalidArgumentError
from sqzkey.models import ChannelParams, ProtocolParams, updated

logger = logging.getLogger(__name__)

DEFAULT_THETA0_BOUND = math.radians(40.0)


class PhaseKind(str, Enum):
    NONE = "none"
    FIXED_OFFSET = "fixed_offset"
    RANDOM_WALK = "random_walk"


class PhaseModel(BaseModel):
    """Residual phase between signal and local oscillator, plus Alice's modulation frame offset

    theta0 and modulation_offset set to None are drawn per frame: theta0
    uniformly in +/- theta0_bound, the modulation offset uniformly in [0, 2 pi).
    """

    model_config = ConfigDict(frozen=True)

    kind: PhaseKind = PhaseKind.NONE
    theta0: Optional[float] = 0.0
    step_std: float = Field(0.0, ge=0)
    modulation_offset: Optional[float] = 0.0
    theta0_bound: float = Field(DEFAULT_THETA0_BOUND, ge=0)


@dataclass(frozen=True)
class FrameTruth:
    """Scalar ground truth of a frame; the phase trajectory itself is not kept"""

    eta: float
    eps_x: float
    eps_p: float
    theta0: float
    modulation_offset: float
    theta_end: float


@dataclass(frozen=True, eq=False)
class SampleFrame:
    """Alice's symbols and Bob's heterodyne outcomes for one frame, in SNU"""

    alice_x: np.ndarray
    alice_p: np.ndarray
    bob_x: np.ndarray
    bob_p: np.ndarray
    seed: Optional[int] = None
    truth: Optional[FrameTruth] = None

    def __post_init__(self):
        lengths = {len(a) for a in (self.alice_x, self.alice_p, self.bob_x, self.bob_p)}
        if len(lengths) != 1:
            raise InvalidArgumentError(f"frame arrays differ in length: {sorted(lengths)}")
        if lengths.pop() < 1:
            raise InvalidArgumentError("frame must hold at least one symbol")

    @property
    def n(self) -> int:
        return len(self.alice_x)

    def with_bob(self, bob_x: np.ndarray, bob_p: np.ndarray) -> "SampleFrame":
        return replace(self, bob_x=bob_x, bob_p=bob_p)

    def with_alice(self, alice_x: np.ndarray, alice_p: np.ndarray) -> "SampleFrame":
        return replace(self, alice_x=alice_x, alice_p=alice_p)


def rotate(x: np.ndarray, p: np.ndarray, theta) -> Tuple[np.ndarray, np.ndarray]:
    """x' = cos x + sin p, p' = -sin x + cos p (theta scalar or per sample)"""
    c, s = np.cos(theta), np.sin(theta)
    return c * x + s * p, -s * x + c * p


def _draw_phase(phase: PhaseModel, rng: np.random.Generator) -> Tuple[float, float]:
    if phase.kind is PhaseKind.NONE:
        theta0 = 0.0
    elif phase.theta0 is None:
        theta0 = float(rng.uniform(-phase.theta0_bound, phase.theta0_bound))
    else:
        theta0 = phase.theta0
    if phase.modulation_offset is None:
        offset = float(rng.uniform(0.0, 2.0 * math.pi))
    else:
        offset = phase.modulation_offset
    return theta0, offset


def _trajectory(phase: PhaseModel, theta0: float, n: int, rng: np.random.Generator) -> np.ndarray:
    if phase.kind is PhaseKind.RANDOM_WALK:
        return theta0 + np.cumsum(rng.normal(0.0, phase.step_std, n))
    return np.full(n, theta0)


def generate_frame(p: ProtocolParams, n: int, phase: PhaseModel, seed: int) -> SampleFrame:
    """Draw one frame; the same (p, n, phase, seed) regenerates it bit for bit"""
    if n < 1:
        raise InvalidArgumentError(f"frame length must be at least 1, got {n}")
    rng = np.random.Generator(np.random.Philox(seed))
    src, ch, det = p.source, p.channel, p.detector

    theta0, offset = _draw_phase(phase, rng)
    alice = rng.normal(0.0, math.sqrt(src.v_m), size=(2, n))
    m_x, m_p = rotate(alice[0], alice[1], offset)
    s_x = rng.normal(0.0, math.sqrt(src.v_sqz), n)
    s_p = rng.normal(0.0, math.sqrt(src.v_antisqz), n)
    loss = rng.normal(0.0, 1.0, size=(2, n))
    e_x = rng.normal(0.0, math.sqrt(ch.eta * ch.eps_x), n)
    e_p = rng.normal(0.0, math.sqrt(ch.eta * ch.eps_p), n)

    root_eta, root_loss = math.sqrt(ch.eta), math.sqrt(1.0 - ch.eta)
    y_x = root_eta * (m_x + s_x) + root_loss * loss[0] + e_x
    y_p = root_eta * (m_p + s_p) + root_loss * loss[1] + e_p

    theta_end = theta0
    if phase.kind is not PhaseKind.NONE:
        theta = _trajectory(phase, theta0, n, rng)
        y_x, y_p = rotate(y_x, y_p, theta)
        theta_end = float(theta[-1])

    trusted = rng.normal(0.0, math.sqrt(det.v_d), size=(2, n))
    z_x = math.sqrt(det.tau) * y_x + math.sqrt(1.0 - det.tau) * trusted[0]
    z_p = math.sqrt(det.tau) * y_p + math.sqrt(1.0 - det.tau) * trusted[1]

    vac = rng.normal(0.0, 1.0, size=(2, n))
    bob_x = (z_x + vac[0]) / math.sqrt(2.0)
    bob_p = (z_p + vac[1]) / math.sqrt(2.0)

    truth = FrameTruth(
        eta=ch.eta,
        eps_x=ch.eps_x,
        eps_p=ch.eps_p,
        theta0=theta0,
        modulation_offset=offset,
        theta_end=theta_end,
    )
    return SampleFrame(alice[0], alice[1], bob_x, bob_p, seed=seed, truth=truth)


def b2b_params(p: ProtocolParams) -> ProtocolParams:
    """Source connected straight to the receiver, modulation off"""
    return ProtocolParams(
        source=updated(p.source, v_m=0.0),
        channel=ChannelParams(eta=1.0),
        detector=p.detector,
    )


def generate_b2b_frame(p: ProtocolParams, n: int, seed: int) -> SampleFrame:
    return generate_frame(b2b_params(p), n, PhaseModel(), seed)
