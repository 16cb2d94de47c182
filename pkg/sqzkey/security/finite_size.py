"""
Finite-size parameter estimation: estimator variances, worst-case bounds and AEP penalty
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

from sqzkey.errors import InvalidArgumentError
from sqzkey.models import (
    ChannelEstimate,
    ChannelParams,
    EstimatorBudget,
    PenaltyConfig,
    ProtocolParams,
)
from sqzkey.protocol import holevo_bound, mutual_information

logger = logging.getLogger(__name__)

ETA_FLOOR = 1e-12


@dataclass(frozen=True)
class WorstCase:
    """Worst-case parameters together with the deviations that produced them"""

    params: ProtocolParams
    no_key: bool
    sigma_eta: float
    sigma_eps_x: float
    sigma_eps_p: float

    @property
    def eta_low(self) -> float:
        return self.params.channel.eta

    @property
    def eps_up(self) -> float:
        return self.params.channel.symmetrized_eps()


def _eps(p: ProtocolParams, symmetrize: bool) -> Tuple[float, float]:
    ch = p.channel.symmetrized() if symmetrize else p.channel
    return ch.eps_x, ch.eps_p


def noise_terms(p: ProtocolParams, symmetrize: bool = True) -> Tuple[float, float]:
    """(V'_Nx, V'_Np): noise referred back through tau, in SNU"""
    tau = p.detector.tau
    if tau <= 0:
        raise InvalidArgumentError("detection efficiency must be positive")
    eta = p.channel.eta
    eps_x, eps_p = _eps(p, symmetrize)
    electronic = (1.0 - tau) / tau * (p.detector.v_d - 1.0)
    v_nx = 2.0 / tau + eta * (eps_x + p.source.v_sqz - 1.0) + electronic
    v_np = 2.0 / tau + eta * (eps_p + p.source.v_antisqz - 1.0) + electronic
    return v_nx, v_np


def transmittance_estimator_variance(p: ProtocolParams, n: int, symmetrize: bool = True) -> float:
    """Var of eta_hat = 2 C^2 / (tau V_M_hat^2), C and V_M_hat pooled over both quadratures

    The modulation variance is taken from the same sample, so only the
    noise projected onto Alice's symbols contributes.
    """
    if n < 1:
        raise InvalidArgumentError(f"n must be at least 1, got {n}")
    v_m = p.source.v_m
    if v_m <= 0:
        raise InvalidArgumentError("transmittance cannot be estimated without modulation")
    v_nx, v_np = noise_terms(p, symmetrize)
    return p.channel.eta * (v_nx + v_np) / (n * v_m)


def _excess_noise_variance(v_own: float, v_other: float, slope: float, eps: float, eta: float, v_m: float, n: int) -> float:
    if v_m <= 0:
        return 2.0 * v_own**2 / (n * eta**2)
    k = (slope - eps) / v_m
    coupled = v_m / eta * ((1.0 + k) ** 2 * v_own + (1.0 - k) ** 2 * v_other)
    return (2.0 * v_own**2 / eta**2 + coupled + v_m**2) / n


def excess_noise_estimator_variance(p: ProtocolParams, n: int, symmetrize: bool = True) -> Tuple[float, float]:
    """(sigma^2_eps_x, sigma^2_eps_p) of the input-referred estimates eps = 2u / (eta_hat tau)

    Both the receiver noise floor and the input referral use eta_hat, so the
    transmittance error enters through the signal-noise covariances. The
    slope of the floor in eta is (1 - V_sqz) for x and (1 - 1/V_sqz - dV_AN)
    for p; both vanish for a coherent source.
    """
    if n < 1:
        raise InvalidArgumentError(f"n must be at least 1, got {n}")
    eta = p.channel.eta
    if eta <= 0:
        raise InvalidArgumentError(f"eta must be positive, got {eta}")
    v_nx, v_np = noise_terms(p, symmetrize)
    eps_x, eps_p = _eps(p, symmetrize)
    src = p.source
    var_x = _excess_noise_variance(v_nx, v_np, 1.0 - src.v_sqz, eps_x, eta, src.v_m, n)
    var_p = _excess_noise_variance(v_np, v_nx, 1.0 - src.v_antisqz, eps_p, eta, src.v_m, n)
    return var_x, var_p


def _bounded(
    p: ProtocolParams,
    eta: float,
    eps_x: float,
    eps_p: float,
    sigmas: Tuple[float, float, float],
    z: float,
) -> WorstCase:
    sigma_eta, sigma_x, sigma_p = sigmas
    eta_low = eta - z * sigma_eta
    no_key = eta_low <= 0.0
    if no_key:
        logger.warning("lower transmittance bound %.3e is not positive; no key", eta_low)
    channel = ChannelParams(
        eta=min(max(eta_low, ETA_FLOOR), 1.0),
        eps_x=max(eps_x + z * sigma_x, 0.0),
        eps_p=max(eps_p + z * sigma_p, 0.0),
    )
    return WorstCase(
        params=p.with_channel(channel),
        no_key=no_key,
        sigma_eta=sigma_eta,
        sigma_eps_x=sigma_x,
        sigma_eps_p=sigma_p,
    )


def worst_case_bounds(p: ProtocolParams, b: EstimatorBudget, symmetrize: bool = True) -> WorstCase:
    """eta - z sigma_eta and eps_i + z sigma_eps_i at the budget's n"""
    var_x, var_p = excess_noise_estimator_variance(p, b.n, symmetrize)
    sigmas = (
        math.sqrt(transmittance_estimator_variance(p, b.n, symmetrize)),
        math.sqrt(var_x),
        math.sqrt(var_p),
    )
    eps_x, eps_p = _eps(p, symmetrize)
    return _bounded(p, p.channel.eta, eps_x, eps_p, sigmas, b.z)


def worst_case(p: ProtocolParams, b: EstimatorBudget, symmetrize: bool = True) -> ProtocolParams:
    return worst_case_bounds(p, b, symmetrize).params


def worst_case_from_estimate(p: ProtocolParams, est: ChannelEstimate, z: float) -> WorstCase:
    """Bounds from measured estimates; raw (unclipped) noise estimates enter the bound"""
    sigmas = (est.sigma_eta, est.sigma_eps_x, est.sigma_eps_p)
    return _bounded(p, est.eta, est.eps_x, est.eps_p, sigmas, z)


def aep_penalty(n: int, c: PenaltyConfig) -> float:
    """Delta(n) = 4 log2(2^(d/2) + 2) sqrt(log2(2 / eps_smooth^2)) / sqrt(n)"""
    if n < 1:
        raise InvalidArgumentError(f"n must be at least 1, got {n}")
    prefactor = 4.0 * math.log2(2.0 ** (c.d / 2.0) + 2.0) * math.sqrt(math.log2(2.0 / c.eps_smooth**2))
    return prefactor / math.sqrt(n)


def finite_size_key_rate(
    p: ProtocolParams,
    beta: float,
    b: EstimatorBudget,
    c: PenaltyConfig,
    symmetrize: bool = True,
) -> float:
    """max(0, beta I - chi - Delta) at the worst-case parameters"""
    bounds = worst_case_bounds(p, b, symmetrize)
    if bounds.no_key:
        return 0.0
    wc = bounds.params
    return max(0.0, beta * mutual_information(wc, symmetrize) - holevo_bound(wc, symmetrize) - aep_penalty(b.n, c))
