"""
Error hierarchy for sqzkey
"""

from typing import Optional


class SqzKeyError(Exception):
    """Base class for every error raised by sqzkey"""


class InvalidArgumentError(SqzKeyError, ValueError):
    """An argument lies outside the domain of the operation"""


class NumericalDomainError(SqzKeyError, ArithmeticError):
    """A numerical step left its domain (e.g. a non-positive pivot)"""


class InvalidStateError(SqzKeyError):
    """A covariance matrix violates positivity or the uncertainty relation"""


class DegenerateModulationError(SqzKeyError):
    """The squeezed purification is undefined at zero modulation"""


class CalibrationError(SqzKeyError):
    """Back-to-back data is inconsistent with the source model"""


class EstimationError(SqzKeyError):
    """Channel parameters cannot be estimated from a frame"""


class DegenerateAlignmentError(SqzKeyError):
    """The outcome ensemble is too symmetric to define an alignment angle"""


class RemapError(SqzKeyError):
    """Alice-Bob cross covariance is too small to define a remapping angle"""


class ReconciliationEfficiencyError(SqzKeyError):
    """Code rate exceeds the mutual information (beta > 1)"""

    def __init__(self, beta: float, message: Optional[str] = None):
        self.beta = beta
        super().__init__(message or f"reconciliation efficiency beta={beta:.6f} exceeds 1")


class ConfigError(SqzKeyError):
    """A run configuration is missing a field or holds an invalid value"""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class FrameFormatError(SqzKeyError):
    """A frame file does not follow the SQZF layout"""
