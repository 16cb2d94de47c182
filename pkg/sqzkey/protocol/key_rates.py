"""
Mutual information, Holevo bound and asymptotic key rate
"""

import logging
import math

from sqzkey.gaussian import CovMat, condition_homodyne, von_neumann_entropy
from sqzkey.models import ProtocolKind, ProtocolParams
from sqzkey.protocol.channel import apply_channel, apply_detector, apply_heterodyne_split, receiver_covariance
from sqzkey.protocol.eb_states import SIGNAL_MODE, build_eb_state

logger = logging.getLogger(__name__)


def _quadrature_information(var_b: float, signal: float) -> float:
    if signal <= 0.0:
        return 0.0
    return 0.5 * math.log2(var_b / (var_b - signal))


def mutual_information(p: ProtocolParams, symmetrize: bool = True) -> float:
    """Bits per symbol: x-quadrature only for squeezed, both quadratures for coherent"""
    cov = receiver_covariance(p, symmetrize=symmetrize)
    info = _quadrature_information(cov[2, 2], cov[0, 2] ** 2 / p.source.v_m if p.source.v_m > 0 else 0.0)
    if p.protocol is ProtocolKind.COHERENT:
        info += _quadrature_information(cov[3, 3], cov[1, 3] ** 2 / p.source.v_m if p.source.v_m > 0 else 0.0)
    return info


def trusted_state(p: ProtocolParams, symmetrize: bool = True) -> CovMat:
    """All trusted modes after channel, detector and heterodyne split

    The heterodyne P readout is the last mode; X is read on the signal mode.
    """
    ch = p.channel.symmetrized() if symmetrize else p.channel
    gamma = build_eb_state(p.source)
    gamma = apply_channel(gamma, SIGNAL_MODE, ch)
    gamma = apply_detector(gamma, SIGNAL_MODE, p.detector)
    return apply_heterodyne_split(gamma, SIGNAL_MODE)


def holevo_bound(p: ProtocolParams, symmetrize: bool = True) -> float:
    """Eve's information on Bob's key quadratures, in bits per symbol"""
    gamma = trusted_state(p, symmetrize=symmetrize)
    readout_p = gamma.n_modes - 1
    given_p = condition_homodyne(gamma, readout_p, "p")
    given_both = condition_homodyne(given_p, SIGNAL_MODE, "x")
    if p.protocol is ProtocolKind.SQUEEZED:
        chi = von_neumann_entropy(given_p) - von_neumann_entropy(given_both)
    else:
        chi = von_neumann_entropy(gamma) - von_neumann_entropy(given_both)
    if chi < -1e-9:
        logger.warning("negative Holevo bound %.3e clipped to 0", chi)
    return max(chi, 0.0)


def asymptotic_key_rate(p: ProtocolParams, beta: float, symmetrize: bool = True) -> float:
    """max(0, beta I - chi)"""
    return max(0.0, beta * mutual_information(p, symmetrize) - holevo_bound(p, symmetrize))
