"""
Operational key rate: puncturing arithmetic, reconciliation efficiency, FER and throughput
"""

import logging
from typing import Optional

from sqzkey.errors import ReconciliationEfficiencyError
from sqzkey.models import (
    EstimatorBudget,
    KeyRateReport,
    PenaltyConfig,
    ProtocolParams,
    ReconciliationConfig,
)
from sqzkey.protocol import holevo_bound, mutual_information
from sqzkey.security.finite_size import WorstCase, aep_penalty, worst_case_bounds

logger = logging.getLogger(__name__)

BETA_TOL = 1e-12


def reference_information(p: ProtocolParams, worst: WorstCase, measured_mi: Optional[float], symmetrize: bool) -> float:
    """Mutual information per symbol that beta is referred to"""
    if measured_mi is not None:
        return p.quadratures * measured_mi
    return mutual_information(worst.params, symmetrize)


def decoded_symbol_rate(p: ProtocolParams, r: ReconciliationConfig) -> Optional[float]:
    """Symbols per second the link and decoder sustain together"""
    if r.symbol_rate is None:
        return None
    rate = r.symbol_rate
    if r.decoder_iteration_rate is not None:
        codewords_per_second = r.decoder_iteration_rate / r.iterations
        rate = min(rate, codewords_per_second * (r.n_code - r.puncture) / p.quadratures)
    return rate


def _report(
    p: ProtocolParams,
    worst: WorstCase,
    beta: float,
    r_punc: float,
    fer: float,
    b: EstimatorBudget,
    c: PenaltyConfig,
    symmetrize: bool,
    symbol_rate: Optional[float] = None,
) -> KeyRateReport:
    i_nom = mutual_information(p, symmetrize)
    chi_nom = holevo_bound(p, symmetrize)
    delta = aep_penalty(b.n, c)
    wc = worst.params
    i_wc = mutual_information(wc, symmetrize)
    chi_wc = holevo_bound(wc, symmetrize)
    k_asym = max(0.0, beta * i_nom - chi_nom)
    if worst.no_key:
        k_finite = k_operational = 0.0
    else:
        k_finite = max(0.0, beta * i_wc - chi_wc - delta)
        k_operational = max(0.0, (1.0 - fer) * (p.quadratures * r_punc - chi_wc - delta))
    report = KeyRateReport(
        protocol=p.protocol,
        i_ab=i_nom,
        i_ab_worst=i_wc,
        chi_nominal=chi_nom,
        chi=chi_wc,
        delta_n=delta,
        eta_low=worst.eta_low,
        eps_up=worst.eps_up,
        beta=beta,
        r_punc=r_punc,
        k_asym=k_asym,
        k_finite=k_finite,
        k_operational=k_operational,
        throughput_excl_dsp=None if symbol_rate is None else k_operational * symbol_rate,
        no_key=worst.no_key or k_operational <= 0.0,
    )
    logger.info(
        "%s: beta=%.4f K_asym=%.6g K_finite=%.6g K_op=%.6g",
        p.protocol.value,
        beta,
        k_asym,
        k_finite,
        k_operational,
    )
    return report


def operational_key_rate(
    p: ProtocolParams,
    r: ReconciliationConfig,
    b: EstimatorBudget,
    c: PenaltyConfig,
    symmetrize: bool = True,
    worst: Optional[WorstCase] = None,
) -> KeyRateReport:
    """Key fraction after reconciliation with the given code and frame error rate"""
    worst = worst or worst_case_bounds(p, b, symmetrize)
    i_ref = reference_information(p, worst, r.measured_mi, symmetrize)
    r_punc = r.r_punc
    beta = p.quadratures * r_punc / i_ref if i_ref > 0 else float("inf")
    if beta > 1.0 + BETA_TOL and not worst.no_key:
        raise ReconciliationEfficiencyError(beta)
    return _report(p, worst, beta, r_punc, r.fer, b, c, symmetrize, decoded_symbol_rate(p, r))


def report_for_beta(
    p: ProtocolParams,
    beta: float,
    b: EstimatorBudget,
    c: PenaltyConfig,
    fer: float = 0.0,
    reference_mi: Optional[float] = None,
    symmetrize: bool = True,
    worst: Optional[WorstCase] = None,
) -> KeyRateReport:
    """Report for a reconciliation efficiency given directly instead of through a code"""
    if not 0.0 <= beta <= 1.0:
        raise ReconciliationEfficiencyError(beta, f"beta must lie in [0, 1], got {beta}")
    worst = worst or worst_case_bounds(p, b, symmetrize)
    i_ref = reference_information(p, worst, reference_mi, symmetrize)
    r_punc = beta * i_ref / p.quadratures
    return _report(p, worst, beta, r_punc, fer, b, c, symmetrize)
