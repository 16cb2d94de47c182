"""
Symbol-level DSP: quadrature alignment and Alice-Bob remapping
"""

import logging
import math
from typing import Tuple

import numpy as np

from sqzkey.errors import DegenerateAlignmentError, InvalidArgumentError, RemapError
from sqzkey.simulation.frames import SampleFrame, rotate

logger = logging.getLogger(__name__)

MIN_SYMBOLS = 1000
ALIGNMENT_SPLIT_SIGMAS = 6.0
REMAP_SIGMAS = 5.0


def _check_length(frame: SampleFrame) -> None:
    if frame.n < MIN_SYMBOLS:
        raise InvalidArgumentError(f"DSP needs at least {MIN_SYMBOLS} symbols, got {frame.n}")


def rotate_outcomes(frame: SampleFrame, theta: float) -> SampleFrame:
    return frame.with_bob(*rotate(frame.bob_x, frame.bob_p, theta))


def align_quadratures(frame: SampleFrame) -> Tuple[float, SampleFrame]:
    """Rotate Bob's outcomes so that X is the low-variance axis and Cov(X, P) vanishes

    Returns the estimated rotation in (-pi/2, pi/2] and the aligned frame.
    """
    _check_length(frame)
    cov = np.cov(frame.bob_x, frame.bob_p)
    a, b, d = cov[0, 0], cov[0, 1], cov[1, 1]
    split = math.hypot(a - d, 2.0 * b) / (a + d)
    if split < ALIGNMENT_SPLIT_SIGMAS / math.sqrt(frame.n):
        raise DegenerateAlignmentError(f"outcome ensemble is symmetric (relative split {split:.3e})")
    theta = 0.5 * math.atan2(2.0 * b, d - a)
    logger.debug("aligned by %.4f deg (split %.3e)", math.degrees(theta), split)
    return theta, rotate_outcomes(frame, -theta)


def remap_alice(frame: SampleFrame) -> Tuple[float, SampleFrame, float]:
    """Rotate Alice's symbols to maximize their covariance with Bob's outcomes

    Returns (phi, remapped frame, C_AB) with C_AB the per-quadrature covariance
    at the optimum.
    """
    _check_length(frame)
    cov = np.cov(np.vstack([frame.alice_x, frame.alice_p, frame.bob_x, frame.bob_p]))
    k_xx, k_xp = cov[0, 2], cov[0, 3]
    k_px, k_pp = cov[1, 2], cov[1, 3]
    num, den = k_px - k_xp, k_xx + k_pp
    c_ab = 0.5 * math.hypot(num, den)
    v_a = 0.5 * (cov[0, 0] + cov[1, 1])
    v_b = 0.5 * (cov[2, 2] + cov[3, 3])
    threshold = REMAP_SIGMAS * math.sqrt(v_a * v_b / frame.n)
    if c_ab < threshold:
        raise RemapError(f"cross covariance {c_ab:.3e} below {threshold:.3e}")
    phi = math.atan2(num, den) % (2.0 * math.pi)
    remapped = frame.with_alice(*rotate(frame.alice_x, frame.alice_p, phi))
    return phi, remapped, c_ab


def remap_objective(frame: SampleFrame, phi: float) -> float:
    """Cov(a_x', X) + Cov(a_p', P) after rotating Alice's symbols by phi"""
    a_x, a_p = rotate(frame.alice_x, frame.alice_p, phi)
    return float(np.cov(a_x, frame.bob_x)[0, 1] + np.cov(a_p, frame.bob_p)[0, 1])
