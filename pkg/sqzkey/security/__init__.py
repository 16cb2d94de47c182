"""
Finite-size security analysis
"""

from sqzkey.security.finite_size import (
    WorstCase,
    aep_penalty,
    excess_noise_estimator_variance,
    finite_size_key_rate,
    noise_terms,
    transmittance_estimator_variance,
    worst_case,
    worst_case_bounds,
    worst_case_from_estimate,
)
from sqzkey.security.reconciliation import (
    decoded_symbol_rate,
    operational_key_rate,
    reference_information,
    report_for_beta,
)

__all__ = [
    "WorstCase",
    "aep_penalty",
    "decoded_symbol_rate",
    "excess_noise_estimator_variance",
    "finite_size_key_rate",
    "noise_terms",
    "operational_key_rate",
    "reference_information",
    "report_for_beta",
    "transmittance_estimator_variance",
    "worst_case",
    "worst_case_bounds",
    "worst_case_from_estimate",
]
