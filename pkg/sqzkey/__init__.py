"""
sqzkey: finite-size security analysis of squeezed-state and coherent-state CV-QKD
"""

from sqzkey.errors import SqzKeyError
from sqzkey.models import (
    ChannelParams,
    DetectorParams,
    EstimatorBudget,
    KeyRateReport,
    PenaltyConfig,
    ProtocolKind,
    ProtocolParams,
    ReconciliationConfig,
    SourceParams,
)
from sqzkey.protocol import asymptotic_key_rate, holevo_bound, mutual_information
from sqzkey.security import finite_size_key_rate, operational_key_rate, report_for_beta

__version__ = "0.1.0"

__all__ = [
    "ChannelParams",
    "DetectorParams",
    "EstimatorBudget",
    "KeyRateReport",
    "PenaltyConfig",
    "ProtocolKind",
    "ProtocolParams",
    "ReconciliationConfig",
    "SourceParams",
    "SqzKeyError",
    "asymptotic_key_rate",
    "finite_size_key_rate",
    "holevo_bound",
    "mutual_information",
    "operational_key_rate",
    "report_for_beta",
]
