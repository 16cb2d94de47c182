"""
Parameter and result records shared across sqzkey
"""

import math
from enum import Enum
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.special import erfcinv

from sqzkey.errors import InvalidArgumentError

VACUUM_TOL = 1e-9


class ProtocolKind(str, Enum):
    SQUEEZED = "squeezed"
    COHERENT = "coherent"


def updated(model: BaseModel, **changes: Any) -> BaseModel:
    """Return a re-validated copy of a frozen record with some fields changed"""
    return type(model).model_validate({**model.model_dump(), **changes})


class SourceParams(BaseModel):
    """Transmitter: squeezing, trusted anti-squeezed noise and modulation, all in SNU"""

    model_config = ConfigDict(frozen=True)

    protocol: ProtocolKind = ProtocolKind.SQUEEZED
    v_sqz: float = Field(1.0, gt=0)
    delta_v_an: float = Field(0.0, ge=0)
    v_m: float = Field(0.0, ge=0)

    @model_validator(mode="before")
    @classmethod
    def _force_coherent(cls, data: Any) -> Any:
        if isinstance(data, dict) and ProtocolKind(data.get("protocol", ProtocolKind.SQUEEZED)) is ProtocolKind.COHERENT:
            data = {**data, "v_sqz": 1.0, "delta_v_an": 0.0}
        return data

    @classmethod
    def squeezed(cls, v_sqz: float, delta_v_an: float, v_m: float) -> "SourceParams":
        return cls(protocol=ProtocolKind.SQUEEZED, v_sqz=v_sqz, delta_v_an=delta_v_an, v_m=v_m)

    @classmethod
    def coherent(cls, v_m: float) -> "SourceParams":
        return cls(protocol=ProtocolKind.COHERENT, v_m=v_m)

    @property
    def v_antisqz(self) -> float:
        """Anti-squeezed quadrature variance including the trusted preparation noise"""
        return 1.0 / self.v_sqz + self.delta_v_an


class ChannelParams(BaseModel):
    """Untrusted channel: transmittance and input-referred excess noise per quadrature"""

    model_config = ConfigDict(frozen=True)

    eta: float = Field(..., gt=0, le=1)
    eps_x: float = Field(0.0, ge=0)
    eps_p: float = Field(0.0, ge=0)

    @classmethod
    def from_attenuation_db(cls, attenuation_db: float, eps_x: float = 0.0, eps_p: float = 0.0) -> "ChannelParams":
        if attenuation_db < 0:
            raise InvalidArgumentError(f"attenuation must be non-negative, got {attenuation_db} dB")
        return cls(eta=10.0 ** (-attenuation_db / 10.0), eps_x=eps_x, eps_p=eps_p)

    def symmetrized_eps(self) -> float:
        return max(self.eps_x, self.eps_p)

    def symmetrized(self) -> "ChannelParams":
        eps = self.symmetrized_eps()
        return ChannelParams(eta=self.eta, eps_x=eps, eps_p=eps)


class DetectorParams(BaseModel):
    """Trusted receiver: efficiency tau and the variance V_D of the noise TMSV"""

    model_config = ConfigDict(frozen=True)

    tau: float = Field(1.0, gt=0, le=1)
    v_d: float = Field(1.0, ge=1)

    @property
    def t(self) -> float:
        """Electronic noise referred to the detected mode"""
        return (1.0 - self.tau) * (self.v_d - 1.0)

    @property
    def t_output(self) -> float:
        """Electronic noise seen in each heterodyne output"""
        return self.t / 2.0

    @classmethod
    def from_noise(cls, tau: float, t: float) -> "DetectorParams":
        """Build a detector from its mode-referred electronic noise t"""
        if t < 0:
            raise InvalidArgumentError(f"electronic noise must be non-negative, got {t}")
        if tau >= 1.0:
            if t > 0:
                raise InvalidArgumentError("a unit-efficiency detector cannot carry electronic noise")
            return cls(tau=tau, v_d=1.0)
        return cls(tau=tau, v_d=1.0 + t / (1.0 - tau))


class ProtocolParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    source: SourceParams
    channel: ChannelParams
    detector: DetectorParams = DetectorParams()

    @property
    def protocol(self) -> ProtocolKind:
        return self.source.protocol

    @property
    def quadratures(self) -> int:
        """Quadratures per symbol that carry key"""
        return 1 if self.protocol is ProtocolKind.SQUEEZED else 2

    def with_channel(self, channel: ChannelParams) -> "ProtocolParams":
        return ProtocolParams(source=self.source, channel=channel, detector=self.detector)


class EstimatorBudget(BaseModel):
    """Symbols used for estimation and the confidence multiplier of the worst-case bounds"""

    model_config = ConfigDict(frozen=True)

    n: int = Field(100_000_000, ge=1)
    z: float = Field(6.5, ge=0)
    eps_pe: float = Field(1e-10, gt=0, lt=1)

    @classmethod
    def from_error_probability(cls, eps_pe: float, n: int) -> "EstimatorBudget":
        """Derive z from a one-sided Gaussian tail probability"""
        if not 0.0 < eps_pe < 0.5:
            raise InvalidArgumentError(f"eps_pe must lie in (0, 0.5), got {eps_pe}")
        return cls(n=n, z=float(math.sqrt(2.0) * erfcinv(2.0 * eps_pe)), eps_pe=eps_pe)


class PenaltyConfig(BaseModel):
    """AEP constants: d key bits per quadrature (one for a binary code) and the smoothing parameter"""

    model_config = ConfigDict(frozen=True)

    d: int = Field(1, ge=1)
    eps_smooth: float = Field(1e-10, gt=0, lt=1)


class ReconciliationConfig(BaseModel):
    """Error-correcting code bookkeeping: length, information bits, puncturing, FER"""

    model_config = ConfigDict(frozen=True)

    n_code: int = Field(..., gt=0)
    k: int = Field(..., gt=0)
    puncture: int = Field(0, ge=0)
    fer: float = Field(0.0, ge=0, le=1)
    iterations: int = Field(1, ge=1)
    measured_mi: Optional[float] = Field(None, gt=0)
    symbol_rate: Optional[float] = Field(None, gt=0)
    decoder_iteration_rate: Optional[float] = Field(None, gt=0)

    @model_validator(mode="after")
    def _check_lengths(self) -> "ReconciliationConfig":
        if self.puncture >= self.n_code:
            raise ValueError(f"puncture {self.puncture} must be smaller than n_code {self.n_code}")
        if self.k > self.n_code - self.puncture:
            raise ValueError(f"k {self.k} exceeds the unpunctured length {self.n_code - self.puncture}")
        return self

    @classmethod
    def from_code_rate(cls, rate: float, n_code: int, puncture: int = 0, **kwargs: Any) -> "ReconciliationConfig":
        return cls(n_code=n_code, k=int(round(rate * n_code)), puncture=puncture, **kwargs)

    @property
    def r_punc(self) -> float:
        """Post-puncturing code rate"""
        return self.k / (self.n_code - self.puncture)


class KeyRateReport(BaseModel):
    """Every intermediate of a finite-size key-rate evaluation"""

    model_config = ConfigDict(frozen=True)

    protocol: ProtocolKind
    i_ab: float
    i_ab_worst: float
    chi_nominal: float
    chi: float
    delta_n: float
    eta_low: float
    eps_up: float
    beta: float
    r_punc: float
    k_asym: float
    k_finite: float
    k_operational: float
    throughput_excl_dsp: Optional[float] = None
    no_key: bool = False

    def as_row(self) -> Dict[str, Any]:
        row = self.model_dump()
        row["protocol"] = self.protocol.value
        return row


class B2BMeasurement(BaseModel):
    """Heterodyne output variances of the source measured without a channel"""

    model_config = ConfigDict(frozen=True)

    v_x_b2b: float = Field(..., gt=0)
    v_p_b2b: float = Field(..., gt=0)
    t: float = Field(0.0, ge=0)
    tau: float = Field(..., gt=0, le=1)


class SourceCalibration(BaseModel):
    model_config = ConfigDict(frozen=True)

    v_sqz_pure: float = Field(1.0, gt=0, le=1)
    delta_v_an: float = Field(0.0, ge=0)

    @property
    def is_vacuum(self) -> bool:
        return abs(self.v_sqz_pure - 1.0) <= VACUUM_TOL and self.delta_v_an <= VACUUM_TOL


class ChannelEstimate(BaseModel):
    """Channel parameters estimated from symbol/outcome pairs

    eps_x and eps_p are the raw input-referred estimates and may be negative;
    reports read the clipped properties, security bounds read the raw values.
    """

    model_config = ConfigDict(frozen=True)

    eta: float
    u_x: float
    u_p: float
    eps_x: float
    eps_p: float
    sigma_eta: float
    sigma_eps_x: float
    sigma_eps_p: float
    n: int
    v_m_hat: float
    c_ab: float
    eta_clipped: bool = False
    noise_clipped: bool = False

    @property
    def eps_x_reported(self) -> float:
        return max(self.eps_x, 0.0)

    @property
    def eps_p_reported(self) -> float:
        return max(self.eps_p, 0.0)

    def to_channel(self) -> ChannelParams:
        return ChannelParams(eta=self.eta, eps_x=self.eps_x_reported, eps_p=self.eps_p_reported)
