"""
Source calibration and channel estimation
"""

from sqzkey.calibration.calibration import (
    b2b_calibrate,
    b2b_forward,
    coherent_excess_noise,
    estimate_channel,
    receiver_noise_floor,
)
from sqzkey.calibration.moments import FrameMoments

__all__ = [
    "FrameMoments",
    "b2b_calibrate",
    "b2b_forward",
    "coherent_excess_noise",
    "estimate_channel",
    "receiver_noise_floor",
]
