"""
Back-to-back source calibration and channel parameter estimation
"""

import logging
from typing import TYPE_CHECKING, Tuple, Union

import numpy as np

from sqzkey.calibration.moments import FrameMoments
from sqzkey.errors import CalibrationError, EstimationError, InvalidArgumentError
from sqzkey.models import (
    B2BMeasurement,
    ChannelEstimate,
    ChannelParams,
    DetectorParams,
    ProtocolParams,
    SourceCalibration,
    SourceParams,
)
from sqzkey.protocol import detection_to_input_noise
from sqzkey.security import excess_noise_estimator_variance, transmittance_estimator_variance

if TYPE_CHECKING:
    from sqzkey.simulation.frames import SampleFrame

logger = logging.getLogger(__name__)

PURITY_TOL = 1e-9
NOISE_TOL = 1e-9
MIN_FRAME = 1000
MODULATION_RTOL = 0.2


def b2b_forward(cal: SourceCalibration, tau: float, t: float) -> B2BMeasurement:
    """Heterodyne output variances of the calibrated source with no channel"""
    half = tau / 2.0
    v_x = 1.0 - half * (1.0 - cal.v_sqz_pure) + t
    v_anti = 1.0 + half * (1.0 / cal.v_sqz_pure - 1.0)
    v_p = v_anti + half * cal.delta_v_an + t
    return B2BMeasurement(v_x_b2b=v_x, v_p_b2b=v_p, t=t, tau=tau)


def b2b_calibrate(m: B2BMeasurement) -> SourceCalibration:
    """Recover pure squeezing and the anti-squeezed preparation noise"""
    if m.v_x_b2b <= m.t:
        raise CalibrationError(f"V_X_b2b={m.v_x_b2b} does not exceed the electronic noise t={m.t}")
    half = m.tau / 2.0
    v_pure = 1.0 - (1.0 - (m.v_x_b2b - m.t)) / half
    if v_pure <= 0.0:
        raise CalibrationError(f"squeezing deeper than allowed by tau={m.tau}: V_sqz_pure={v_pure:.6g}")
    if v_pure > 1.0 + PURITY_TOL:
        raise CalibrationError(f"squeezed quadrature above shot noise: V_sqz_pure={v_pure:.6g}")
    v_pure = min(v_pure, 1.0)
    v_anti = 1.0 + half * (1.0 / v_pure - 1.0)
    delta = (m.v_p_b2b - v_anti - m.t) / half
    if delta < -NOISE_TOL:
        raise CalibrationError(f"negative anti-squeezed noise dV_AN={delta:.6g}")
    cal = SourceCalibration(v_sqz_pure=v_pure, delta_v_an=max(delta, 0.0))
    logger.info("B2B calibration: V_sqz_pure=%.6f dV_AN=%.6f", cal.v_sqz_pure, cal.delta_v_an)
    return cal


def receiver_noise_floor(cal: SourceCalibration, eta: float, tau: float) -> Tuple[float, float]:
    """(V_sqz_Rx, V_antisqz_Rx) without induced excess noise"""
    g = tau * eta / 2.0
    return 1.0 - g * (1.0 - cal.v_sqz_pure), 1.0 + g * (1.0 / cal.v_sqz_pure - 1.0)


def coherent_excess_noise(v_b: float, c_ab_sq: float, t: float) -> float:
    """u = V_B - C^2 - t - 1 with C^2 the normalized signal contribution"""
    return v_b - c_ab_sq - t - 1.0


def estimate_channel(
    frame: Union["SampleFrame", FrameMoments],
    cal: SourceCalibration,
    det: DetectorParams,
    v_m: float,
) -> ChannelEstimate:
    """eta, u and eps estimates from paired symbols and heterodyne outcomes"""
    moments = frame if isinstance(frame, FrameMoments) else FrameMoments.from_frame(frame)
    if moments.n < MIN_FRAME:
        raise InvalidArgumentError(f"estimation needs at least {MIN_FRAME} symbols, got {moments.n}")
    cov = moments.covariance()
    v_m_hat = 0.5 * (cov[0, 0] + cov[1, 1])
    if abs(v_m_hat - v_m) > MODULATION_RTOL * v_m:
        raise EstimationError(f"empirical modulation variance {v_m_hat:.6g} is not within 20% of V_M={v_m}")
    c_ab = 0.5 * (cov[0, 2] + cov[1, 3])
    if c_ab <= 0.0:
        raise EstimationError(f"Alice-Bob covariance {c_ab:.6g} is not positive")

    tau = det.tau
    eta = 2.0 * c_ab**2 / (tau * v_m_hat**2)
    eta_clipped = eta > 1.0
    if eta_clipped:
        logger.warning("estimated transmittance %.6f above 1, clipped", eta)
        eta = 1.0

    signal = c_ab**2 / v_m_hat
    t_out = det.t_output
    if cal.is_vacuum:
        u_x = coherent_excess_noise(cov[2, 2], signal, t_out)
        u_p = coherent_excess_noise(cov[3, 3], signal, t_out)
    else:
        floor_x, floor_p = receiver_noise_floor(cal, eta, tau)
        u_x = cov[2, 2] - signal - floor_x - t_out
        u_p = cov[3, 3] - signal - floor_p - tau * eta / 2.0 * cal.delta_v_an - t_out
    noise_clipped = u_x < 0.0 or u_p < 0.0
    if noise_clipped:
        logger.warning("negative excess-noise estimate (u_x=%.3e, u_p=%.3e) reported as 0", u_x, u_p)

    eps_x = detection_to_input_noise(u_x, eta, tau)
    eps_p = detection_to_input_noise(u_p, eta, tau)
    nominal = ProtocolParams(
        source=SourceParams.squeezed(cal.v_sqz_pure, cal.delta_v_an, v_m),
        channel=ChannelParams(eta=eta, eps_x=max(eps_x, 0.0), eps_p=max(eps_p, 0.0)),
        detector=det,
    )
    var_x, var_p = excess_noise_estimator_variance(nominal, moments.n, symmetrize=False)
    return ChannelEstimate(
        eta=eta,
        u_x=u_x,
        u_p=u_p,
        eps_x=eps_x,
        eps_p=eps_p,
        sigma_eta=float(np.sqrt(transmittance_estimator_variance(nominal, moments.n, symmetrize=False))),
        sigma_eps_x=float(np.sqrt(var_x)),
        sigma_eps_p=float(np.sqrt(var_p)),
        n=moments.n,
        v_m_hat=v_m_hat,
        c_ab=c_ab,
        eta_clipped=eta_clipped,
        noise_clipped=noise_clipped,
    )
