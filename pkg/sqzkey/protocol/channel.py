"""
Untrusted channel, trusted detector and heterodyne receiver models
"""

import numpy as np

from sqzkey.errors import InvalidArgumentError
from sqzkey.gaussian import CovMat, apply, beamsplitter, direct_sum, two_mode_squeezed_vacuum, vacuum_state
from sqzkey.models import ChannelParams, DetectorParams, ProtocolParams


def _check_mode(gamma: CovMat, mode: int) -> None:
    if not 0 <= mode < gamma.n_modes:
        raise InvalidArgumentError(f"mode {mode} out of range for {gamma.n_modes} modes")


def apply_channel(gamma: CovMat, mode: int, ch: ChannelParams) -> CovMat:
    """Lossy channel with input-referred excess noise; correlations scale by sqrt(eta)"""
    _check_mode(gamma, mode)
    x = np.eye(2 * gamma.n_modes)
    y = np.zeros_like(x)
    i = 2 * mode
    x[i, i] = x[i + 1, i + 1] = np.sqrt(ch.eta)
    y[i, i] = (1.0 - ch.eta) + ch.eta * ch.eps_x
    y[i + 1, i + 1] = (1.0 - ch.eta) + ch.eta * ch.eps_p
    return CovMat(x @ gamma.matrix @ x.T + y, validate=False)


def apply_detector(gamma: CovMat, mode: int, det: DetectorParams) -> CovMat:
    """Mix the mode with one arm of a TMSV(V_D) on a beamsplitter of transmittance tau

    Both ancilla modes are appended and retained.
    """
    _check_mode(gamma, mode)
    n = gamma.n_modes
    extended = direct_sum(gamma, two_mode_squeezed_vacuum(det.v_d))
    return apply(beamsplitter(mode, n, det.tau, n + 2), extended)


def apply_heterodyne_split(gamma: CovMat, mode: int) -> CovMat:
    """Balanced split with a fresh vacuum mode appended last

    X is read on `mode`, P on the appended mode.
    """
    _check_mode(gamma, mode)
    n = gamma.n_modes
    extended = direct_sum(gamma, vacuum_state(1))
    return apply(beamsplitter(mode, n, 0.5, n + 1), extended)


def receiver_covariance(p: ProtocolParams, symmetrize: bool = False) -> np.ndarray:
    """Prepare-and-measure covariance after detection, ordered (a_x, a_p, X, P)"""
    ch = p.channel.symmetrized() if symmetrize else p.channel
    src = p.source
    g = p.detector.tau * ch.eta / 2.0
    t_out = p.detector.t_output
    var_x = 1.0 + g * (src.v_m + src.v_sqz - 1.0) + g * ch.eps_x + t_out
    var_p = 1.0 + g * (src.v_m + src.v_antisqz - 1.0) + g * ch.eps_p + t_out
    c = np.sqrt(g) * src.v_m
    return np.array(
        [
            [src.v_m, 0.0, c, 0.0],
            [0.0, src.v_m, 0.0, c],
            [c, 0.0, var_x, 0.0],
            [0.0, c, 0.0, var_p],
        ]
    )


def input_to_output_noise(eps: float, eta: float) -> float:
    """Channel-output-referred excess noise eta * eps"""
    return eta * eps


def output_to_input_noise(eps_out: float, eta: float) -> float:
    if eta <= 0:
        raise InvalidArgumentError(f"eta must be positive, got {eta}")
    return eps_out / eta


def input_to_detection_noise(eps: float, eta: float, tau: float) -> float:
    """Excess noise u seen in one heterodyne output"""
    return tau * eta * eps / 2.0


def detection_to_input_noise(u: float, eta: float, tau: float) -> float:
    """Input-referred excess noise eps = 2u / (eta tau)"""
    if eta <= 0 or tau <= 0:
        raise InvalidArgumentError(f"eta and tau must be positive, got eta={eta}, tau={tau}")
    return 2.0 * u / (eta * tau)
