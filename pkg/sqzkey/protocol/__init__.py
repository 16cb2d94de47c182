"""
Protocol models: EB purifications, channel, detector and key-rate terms
"""

from sqzkey.protocol.channel import (
    apply_channel,
    apply_detector,
    apply_heterodyne_split,
    detection_to_input_noise,
    input_to_detection_noise,
    input_to_output_noise,
    output_to_input_noise,
    receiver_covariance,
)
from sqzkey.protocol.eb_states import (
    SIGNAL_MODE,
    build_coherent_eb_state,
    build_eb_state,
    build_squeezed_eb_state,
    build_unmodulated_state,
    conditional_signal_state,
    three_squeezer_variances,
)
from sqzkey.protocol.key_rates import asymptotic_key_rate, holevo_bound, mutual_information, trusted_state

__all__ = [
    "SIGNAL_MODE",
    "apply_channel",
    "apply_detector",
    "apply_heterodyne_split",
    "asymptotic_key_rate",
    "build_coherent_eb_state",
    "build_eb_state",
    "build_squeezed_eb_state",
    "build_unmodulated_state",
    "conditional_signal_state",
    "detection_to_input_noise",
    "holevo_bound",
    "input_to_detection_noise",
    "input_to_output_noise",
    "mutual_information",
    "output_to_input_noise",
    "receiver_covariance",
    "three_squeezer_variances",
    "trusted_state",
]
