"""
Run configuration: INI files parsed into a validated RunConfig
"""

import configparser
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from sqzkey.errors import ConfigError, InvalidArgumentError
from sqzkey.models import (
    ChannelParams,
    DetectorParams,
    EstimatorBudget,
    PenaltyConfig,
    ProtocolKind,
    ProtocolParams,
    ReconciliationConfig,
    SourceParams,
    updated,
)
from sqzkey.settings import settings
from sqzkey.simulation import B2BCadence, PhaseKind, PhaseModel, SimulationConfig

SWEEP_VARIABLES = (
    "beta",
    "eta",
    "attenuation_db",
    "eps",
    "eps_x",
    "eps_p",
    "eps_output",
    "v_m",
    "v_sqz",
    "delta_v_an",
    "n",
    "tau",
    "v_d",
    "fer",
)

RANDOM = "random"


class RunMode(str, Enum):
    KEYRATE = "keyrate"
    SWEEP = "sweep"
    SIMULATE = "simulate"
    CALIBRATE = "calibrate"


class ProtocolChoice(str, Enum):
    SQUEEZED = "squeezed"
    COHERENT = "coherent"
    BOTH = "both"


class SweepScale(str, Enum):
    LINEAR = "linear"
    LOG = "log"


class SweepAxis(BaseModel):
    """One sweep axis, written in INI as 'variable start stop points [linear|log]'"""

    model_config = ConfigDict(frozen=True)

    variable: str
    start: float
    stop: float
    points: int = Field(..., ge=2)
    scale: SweepScale = SweepScale.LINEAR

    @field_validator("variable")
    @classmethod
    def _known_variable(cls, v: str) -> str:
        if v not in SWEEP_VARIABLES:
            raise ValueError(f"unknown sweep variable {v!r}; expected one of {', '.join(SWEEP_VARIABLES)}")
        return v

    @model_validator(mode="after")
    def _positive_for_log(self) -> "SweepAxis":
        if self.scale is SweepScale.LOG and (self.start <= 0 or self.stop <= 0):
            raise ValueError("log axes need positive start and stop")
        return self

    @classmethod
    def parse(cls, text: str) -> "SweepAxis":
        parts = text.split()
        if len(parts) not in (4, 5):
            raise ValueError(f"expected 'variable start stop points [linear|log]', got {text!r}")
        data = dict(variable=parts[0], start=float(parts[1]), stop=float(parts[2]), points=int(parts[3]))
        if len(parts) == 5:
            data["scale"] = parts[4]
        return cls(**data)

    def to_text(self) -> str:
        return f"{self.variable} {self.start!r} {self.stop!r} {self.points} {self.scale.value}"

    def values(self) -> np.ndarray:
        if self.scale is SweepScale.LOG:
            return np.geomspace(self.start, self.stop, self.points)
        return np.linspace(self.start, self.stop, self.points)


class CoherentOverrides(BaseModel):
    """Values that differ for the coherent-state run of a side-by-side comparison"""

    model_config = ConfigDict(frozen=True)

    v_m: Optional[float] = Field(None, ge=0)
    eta: Optional[float] = Field(None, gt=0, le=1)
    eps_x: Optional[float] = Field(None, ge=0)
    eps_p: Optional[float] = Field(None, ge=0)
    k: Optional[int] = Field(None, gt=0)
    puncture: Optional[int] = Field(None, ge=0)
    measured_mi: Optional[float] = Field(None, gt=0)
    fer: Optional[float] = Field(None, ge=0, le=1)
    iterations: Optional[int] = Field(None, ge=1)
    beta: Optional[float] = Field(None, ge=0, le=1)


class SimulationSection(BaseModel):
    """Simulation settings with angles in degrees; 'random' angles are drawn per frame"""

    model_config = ConfigDict(frozen=True)

    frames: int = Field(250, ge=1)
    n_per_frame: int = Field(400_000, ge=1000)
    phase: PhaseKind = PhaseKind.FIXED_OFFSET
    theta0_deg: Optional[float] = None
    theta0_bound_deg: float = Field(40.0, ge=0)
    step_std_deg: float = Field(0.0, ge=0)
    modulation_offset_deg: Optional[float] = None
    b2b_cadence: B2BCadence = B2BCadence.PER_CAMPAIGN
    b2b_frames: int = Field(1, ge=1)
    save_frames: bool = False
    frames_dir: Optional[str] = None

    def to_simulation_config(self) -> SimulationConfig:
        phase = PhaseModel(
            kind=self.phase,
            theta0=None if self.theta0_deg is None else math.radians(self.theta0_deg),
            theta0_bound=math.radians(self.theta0_bound_deg),
            step_std=math.radians(self.step_std_deg),
            modulation_offset=None if self.modulation_offset_deg is None else math.radians(self.modulation_offset_deg),
        )
        return SimulationConfig(
            frames=self.frames,
            n_per_frame=self.n_per_frame,
            phase=phase,
            b2b_cadence=self.b2b_cadence,
            b2b_frames=self.b2b_frames,
            save_frames=self.save_frames,
            frames_dir=self.frames_dir,
        )


class CalibrationSection(BaseModel):
    model_config = ConfigDict(frozen=True)

    b2b_file: Optional[str] = None


@dataclass(frozen=True)
class Scenario:
    """Everything one key-rate evaluation needs"""

    params: ProtocolParams
    budget: EstimatorBudget
    penalty: PenaltyConfig
    recon: Optional[ReconciliationConfig]
    beta: Optional[float]
    fer: float = 0.0
    measured_mi: Optional[float] = None


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    mode: RunMode = RunMode.KEYRATE
    protocol: ProtocolChoice = ProtocolChoice.BOTH
    seed: int = 0
    output: Optional[str] = None
    workers: int = Field(default_factory=lambda: settings.workers, ge=1)
    source: SourceParams
    channel: ChannelParams
    detector: DetectorParams = DetectorParams()
    coherent: CoherentOverrides = CoherentOverrides()
    estimation: EstimatorBudget = EstimatorBudget()
    penalty: PenaltyConfig = PenaltyConfig()
    beta: Optional[float] = Field(None, ge=0, le=1)
    reconciliation: Optional[ReconciliationConfig] = None
    sweep: List[SweepAxis] = Field(default_factory=list, max_length=2)
    simulation: SimulationSection = SimulationSection()
    calibration: CalibrationSection = CalibrationSection()

    @model_validator(mode="after")
    def _distinct_axes(self) -> "RunConfig":
        names = [a.variable for a in self.sweep]
        if len(set(names)) != len(names):
            raise ValueError(f"sweep axes must differ, got {names}")
        return self

    def protocols(self) -> List[ProtocolKind]:
        if self.protocol is ProtocolChoice.BOTH:
            return [ProtocolKind.SQUEEZED, ProtocolKind.COHERENT]
        return [ProtocolKind(self.protocol.value)]

    def params_for(self, kind: ProtocolKind) -> ProtocolParams:
        if kind is ProtocolKind.SQUEEZED:
            return ProtocolParams(source=self.source, channel=self.channel, detector=self.detector)
        o = self.coherent
        channel = updated(
            self.channel,
            **{k: v for k, v in (("eta", o.eta), ("eps_x", o.eps_x), ("eps_p", o.eps_p)) if v is not None},
        )
        source = SourceParams.coherent(self.source.v_m if o.v_m is None else o.v_m)
        return ProtocolParams(source=source, channel=channel, detector=self.detector)

    def reconciliation_for(self, kind: ProtocolKind) -> Optional[ReconciliationConfig]:
        if self.reconciliation is None or kind is ProtocolKind.SQUEEZED:
            return self.reconciliation
        o = self.coherent
        changes = {
            k: getattr(o, k)
            for k in ("k", "puncture", "measured_mi", "fer", "iterations")
            if getattr(o, k) is not None
        }
        return updated(self.reconciliation, **changes) if changes else self.reconciliation

    def beta_for(self, kind: ProtocolKind) -> Optional[float]:
        if kind is ProtocolKind.COHERENT and self.coherent.beta is not None:
            return self.coherent.beta
        return self.beta

    def scenario(self, kind: ProtocolKind) -> Scenario:
        recon = self.reconciliation_for(kind)
        return Scenario(
            params=self.params_for(kind),
            budget=self.estimation,
            penalty=self.penalty,
            recon=recon,
            beta=self.beta_for(kind),
            fer=recon.fer if recon else 0.0,
            measured_mi=recon.measured_mi if recon else None,
        )


# INI parsing

_Converter = Callable[[str], Any]


def _number(text: str) -> float:
    return float(text)


def _integer(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        value = float(text)
    if not value.is_integer():
        raise ValueError(f"{text!r} is not an integer")
    return int(value)


def _flag(text: str) -> bool:
    lowered = text.lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"{text!r} is not a boolean")


def _angle(text: str) -> Optional[float]:
    return None if text.lower() == RANDOM else float(text)


_SCHEMA: Dict[str, Dict[str, _Converter]] = {
    "run": {"mode": str, "protocol": str, "seed": _integer, "output": str, "workers": _integer},
    "source": {"v_sqz": _number, "delta_v_an": _number, "v_m": _number},
    "channel": {"eta": _number, "attenuation_db": _number, "eps": _number, "eps_x": _number, "eps_p": _number},
    "detector": {"tau": _number, "v_d": _number, "t": _number},
    "coherent": {
        "v_m": _number,
        "eta": _number,
        "eps_x": _number,
        "eps_p": _number,
        "k": _integer,
        "puncture": _integer,
        "measured_mi": _number,
        "fer": _number,
        "iterations": _integer,
        "beta": _number,
    },
    "estimation": {"n": _integer, "z": _number, "eps_pe": _number},
    "penalty": {"d": _integer, "eps_smooth": _number},
    "reconciliation": {
        "beta": _number,
        "n_code": _integer,
        "k": _integer,
        "code_rate": _number,
        "puncture": _integer,
        "fer": _number,
        "iterations": _integer,
        "measured_mi": _number,
        "symbol_rate": _number,
        "decoder_iteration_rate": _number,
    },
    "sweep": {"axis1": str, "axis2": str},
    "simulation": {
        "frames": _integer,
        "n_per_frame": _integer,
        "phase": str,
        "theta0_deg": _angle,
        "theta0_bound_deg": _number,
        "step_std_deg": _number,
        "modulation_offset_deg": _angle,
        "b2b_cadence": str,
        "b2b_frames": _integer,
        "save_frames": _flag,
        "frames_dir": str,
    },
    "calibration": {"b2b_file": str},
}


def _read_sections(parser: configparser.ConfigParser) -> Dict[str, Dict[str, Any]]:
    sections: Dict[str, Dict[str, Any]] = {}
    for name in parser.sections():
        if name not in _SCHEMA:
            raise ConfigError(name, "unknown section")
        values = {}
        for key, raw in parser.items(name):
            field = f"{name}.{key}"
            if key not in _SCHEMA[name]:
                raise ConfigError(field, "unknown key")
            try:
                values[key] = _SCHEMA[name][key](raw.strip())
            except ValueError as e:
                raise ConfigError(field, str(e)) from e
        sections[name] = values
    return sections


def _channel(values: Dict[str, Any]) -> Dict[str, Any]:
    if "eta" in values and "attenuation_db" in values:
        raise ConfigError("channel.attenuation_db", "give either eta or attenuation_db, not both")
    if "eps" in values and ("eps_x" in values or "eps_p" in values):
        raise ConfigError("channel.eps", "give either eps or eps_x/eps_p, not both")
    out: Dict[str, Any] = {}
    if "attenuation_db" in values:
        db = values["attenuation_db"]
        if db < 0:
            raise ConfigError("channel.attenuation_db", "must be non-negative")
        out["eta"] = 10.0 ** (-db / 10.0)
    elif "eta" in values:
        out["eta"] = values["eta"]
    else:
        raise ConfigError("channel.eta", "missing (give eta or attenuation_db)")
    if "eps" in values:
        out["eps_x"] = out["eps_p"] = values["eps"]
    for key in ("eps_x", "eps_p"):
        if key in values:
            out[key] = values[key]
    return out


def _detector(values: Dict[str, Any]) -> Dict[str, Any]:
    if "v_d" in values and "t" in values:
        raise ConfigError("detector.t", "give either v_d or t, not both")
    if "t" in values:
        try:
            det = DetectorParams.from_noise(values.get("tau", 1.0), values["t"])
        except (InvalidArgumentError, ValidationError) as e:
            raise ConfigError("detector.t", str(e)) from e
        return det.model_dump()
    return dict(values)


def _reconciliation(values: Dict[str, Any]) -> Optional[Dict[str, Any]]:
    values = {k: v for k, v in values.items() if k != "beta"}
    if not values:
        return None
    if "n_code" not in values:
        raise ConfigError("reconciliation.n_code", "missing")
    if "code_rate" in values:
        if "k" in values:
            raise ConfigError("reconciliation.code_rate", "give either k or code_rate, not both")
        values["k"] = int(round(values.pop("code_rate") * values["n_code"]))
    return values


def build_config(sections: Dict[str, Dict[str, Any]], base_dir: Optional[Path] = None) -> RunConfig:
    """Validate parsed sections into a RunConfig"""
    run = sections.get("run", {})
    if "channel" not in sections:
        raise ConfigError("channel", "missing section")
    if "source" not in sections:
        raise ConfigError("source", "missing section")
    data: Dict[str, Any] = dict(run)
    data["source"] = {"protocol": ProtocolKind.SQUEEZED.value, **sections["source"]}
    data["channel"] = _channel(sections["channel"])
    data["detector"] = _detector(sections.get("detector", {}))
    data["coherent"] = sections.get("coherent", {})
    data["estimation"] = sections.get("estimation", {})
    data["penalty"] = sections.get("penalty", {})
    recon_values = sections.get("reconciliation", {})
    if "beta" in recon_values:
        data["beta"] = recon_values["beta"]
    data["reconciliation"] = _reconciliation(recon_values)
    try:
        data["sweep"] = [SweepAxis.parse(sections["sweep"][k]) for k in ("axis1", "axis2") if k in sections.get("sweep", {})]
    except (ValueError, ValidationError) as e:
        raise ConfigError("sweep", str(e)) from e
    data["simulation"] = sections.get("simulation", {})
    calibration = dict(sections.get("calibration", {}))
    if base_dir is not None and calibration.get("b2b_file"):
        calibration["b2b_file"] = str((base_dir / calibration["b2b_file"]).resolve())
    data["calibration"] = calibration
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(part) for part in first["loc"]) or "config"
        raise ConfigError(field, first["msg"]) from e


def parse_config(text: str, base_dir: Optional[Path] = None) -> RunConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as e:
        raise ConfigError("config", str(e)) from e
    return build_config(_read_sections(parser), base_dir)


def load_config(path: Union[str, Path], **overrides: Any) -> RunConfig:
    """Read an INI file; non-None keyword overrides (mode, seed, output) win"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError("config", f"cannot read {path}: {e}") from e
    cfg = parse_config(text, path.parent)
    changes = {k: v for k, v in overrides.items() if v is not None}
    if changes:
        try:
            cfg = RunConfig.model_validate({**cfg.model_dump(), **changes})
        except ValidationError as e:
            first = e.errors()[0]
            raise ConfigError(".".join(str(p) for p in first["loc"]), first["msg"]) from e
    return cfg


# INI dumping

def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_ini(cfg: RunConfig) -> str:
    """Fully resolved config; parse_config(to_ini(cfg)) == cfg"""
    parser = configparser.ConfigParser(interpolation=None)

    def put(section: str, values: Dict[str, Any]) -> None:
        kept = {k: _fmt(v) for k, v in values.items() if v is not None}
        if kept:
            parser[section] = kept

    put("run", {"mode": cfg.mode, "protocol": cfg.protocol, "seed": cfg.seed, "output": cfg.output, "workers": cfg.workers})
    put("source", cfg.source.model_dump(exclude={"protocol"}))
    put("channel", cfg.channel.model_dump())
    put("detector", cfg.detector.model_dump())
    put("coherent", cfg.coherent.model_dump())
    put("estimation", cfg.estimation.model_dump())
    put("penalty", cfg.penalty.model_dump())
    recon = cfg.reconciliation.model_dump() if cfg.reconciliation else {}
    put("reconciliation", {"beta": cfg.beta, **recon})
    put("sweep", {f"axis{i + 1}": axis.to_text() for i, axis in enumerate(cfg.sweep)})
    sim = cfg.simulation.model_dump()
    for key in ("theta0_deg", "modulation_offset_deg"):
        if sim[key] is None:
            sim[key] = RANDOM
    put("simulation", sim)
    put("calibration", cfg.calibration.model_dump())

    lines = []
    for name in parser.sections():
        lines.append(f"[{name}]")
        lines.extend(f"{k} = {v}" for k, v in parser[name].items())
        lines.append("")
    return "\n".join(lines)
