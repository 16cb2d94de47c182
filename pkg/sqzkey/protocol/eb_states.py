"""
Entanglement-based purifications of the squeezed-state and coherent-state protocols

Squeezed layout (4 modes):
    0  C  Alice, homodyned in x
    1  B  transmitted signal
    2  D  Alice, homodyned in p
    3  N  trusted ancilla carrying the anti-squeezed preparation noise
Coherent layout (2 modes):
    0  A  Alice, heterodyned
    1  B  transmitted signal
"""

import logging
import math
from typing import Tuple

from sqzkey.errors import DegenerateModulationError, InvalidArgumentError
from sqzkey.gaussian import (
    CovMat,
    apply,
    beamsplitter,
    condition_sequence,
    partial_trace,
    qnd_gate,
    squeezer,
    two_mode_squeezed_vacuum,
    vacuum_state,
)
from sqzkey.models import ProtocolKind, SourceParams

logger = logging.getLogger(__name__)

SIGNAL_MODE = 1
SQUEEZED_MODES = 4
ALICE_X_MODE = 0
ALICE_P_MODE = 2
NOISE_MODE = 3


def three_squeezer_variances(v_sqz: float, v_m: float) -> Tuple[float, float, float]:
    """x-variances (V1, V2, V3) of the three single-mode squeezers"""
    if v_m <= 0:
        raise DegenerateModulationError("squeezer variances are undefined without modulation")
    s = v_sqz + v_m
    root = math.sqrt(s * (v_m + v_sqz * v_m * s) / (1.0 + v_sqz * v_m))
    v3 = v_sqz**2 * v_m * s / (v_m * (1.0 + v_sqz * v_m))
    return s + root, s - root, v3


def _squeezed_layout(source: SourceParams) -> CovMat:
    v1, v2, v3 = three_squeezer_variances(source.v_sqz, source.v_m)
    n = SQUEEZED_MODES
    gamma = vacuum_state(n)
    for s in (
        squeezer(0, v1, n),
        squeezer(SIGNAL_MODE, v2, n),
        squeezer(ALICE_P_MODE, v3, n),
        beamsplitter(0, SIGNAL_MODE, 0.5, n),
        beamsplitter(0, ALICE_P_MODE, 0.5, n),
    ):
        gamma = apply(s, gamma)
    return gamma


def _inject_antisqueezed_noise(gamma: CovMat, delta_v_an: float) -> CovMat:
    if delta_v_an == 0.0:
        return gamma
    return apply(qnd_gate(SIGNAL_MODE, NOISE_MODE, math.sqrt(delta_v_an), gamma.n_modes), gamma)


def build_squeezed_eb_state(source: SourceParams) -> CovMat:
    """Four-mode purification whose signal mode carries (V_M+V_sqz, V_M+1/V_sqz+dV_AN)"""
    if source.protocol is not ProtocolKind.SQUEEZED:
        raise InvalidArgumentError("build_squeezed_eb_state needs a squeezed source")
    gamma = _inject_antisqueezed_noise(_squeezed_layout(source), source.delta_v_an)
    logger.debug("squeezed EB state built for %s", source)
    return gamma


def build_unmodulated_state(source: SourceParams) -> CovMat:
    """Same layout as the squeezed EB state with V_M = 0: Alice's modes stay vacuum"""
    n = SQUEEZED_MODES
    gamma = apply(squeezer(SIGNAL_MODE, source.v_sqz, n), vacuum_state(n))
    return _inject_antisqueezed_noise(gamma, source.delta_v_an)


def build_coherent_eb_state(v_m: float) -> CovMat:
    """TMSV with arm variance V_M + 1"""
    if v_m < 0:
        raise InvalidArgumentError(f"modulation variance must be non-negative, got {v_m}")
    return two_mode_squeezed_vacuum(v_m + 1.0)


def build_eb_state(source: SourceParams) -> CovMat:
    if source.protocol is ProtocolKind.COHERENT:
        return build_coherent_eb_state(source.v_m)
    if source.v_m == 0.0:
        return build_unmodulated_state(source)
    return build_squeezed_eb_state(source)


def conditional_signal_state(gamma: CovMat) -> CovMat:
    """Signal-mode state after Alice homodynes x on C and p on D"""
    if gamma.n_modes != SQUEEZED_MODES:
        raise InvalidArgumentError(f"expected the {SQUEEZED_MODES}-mode squeezed layout, got {gamma.n_modes} modes")
    remaining = condition_sequence(gamma, [(ALICE_X_MODE, "x"), (ALICE_P_MODE, "p")])
    # remaining modes: B, N
    return partial_trace(remaining, [0])
