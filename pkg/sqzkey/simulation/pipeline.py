"""
End-to-end Monte Carlo run: generate, align, remap, estimate, bound and rate
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from functools import partial
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from sqzkey.calibration import FrameMoments, b2b_calibrate, estimate_channel
from sqzkey.errors import InvalidArgumentError
from sqzkey.models import (
    B2BMeasurement,
    ChannelEstimate,
    EstimatorBudget,
    KeyRateReport,
    PenaltyConfig,
    ProtocolKind,
    ProtocolParams,
    ReconciliationConfig,
    SourceCalibration,
    SourceParams,
)
from sqzkey.security import operational_key_rate, report_for_beta, worst_case_from_estimate
from sqzkey.simulation.dsp import align_quadratures, remap_alice
from sqzkey.simulation.frames import FrameTruth, PhaseModel, SampleFrame, generate_b2b_frame, generate_frame
from sqzkey.workers import map_ordered

logger = logging.getLogger(__name__)


class B2BCadence(str, Enum):
    PER_CAMPAIGN = "per_campaign"
    PER_FRAME = "per_frame"


class SimulationConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    frames: int = Field(250, ge=1)
    n_per_frame: int = Field(400_000, ge=1000)
    phase: PhaseModel = PhaseModel()
    b2b_cadence: B2BCadence = B2BCadence.PER_CAMPAIGN
    b2b_frames: int = Field(1, ge=1)
    save_frames: bool = False
    frames_dir: Optional[str] = None


@dataclass(frozen=True)
class FrameSummary:
    index: int
    seed: int
    n: int
    theta_hat: float
    phi_hat: float
    c_ab: float
    eta_hat: float
    eps_x_hat: float
    eps_p_hat: float
    theta0: float
    modulation_offset: float


@dataclass(frozen=True)
class TruthComparison:
    parameter: str
    truth: float
    estimate: float
    sigma: float

    @property
    def delta(self) -> float:
        return self.estimate - self.truth

    @property
    def delta_over_sigma(self) -> float:
        return self.delta / self.sigma if self.sigma > 0 else float("nan")


@dataclass(frozen=True)
class SimulationResult:
    report: KeyRateReport
    estimate: ChannelEstimate
    calibration: SourceCalibration
    frames: List[FrameSummary]
    truth: List[TruthComparison]
    spread: Dict[str, Tuple[float, float]] = field(default_factory=dict)
    sample_frames: List[SampleFrame] = field(default_factory=list)


@dataclass(frozen=True, eq=False)
class _Processed:
    moments: FrameMoments
    theta_hat: float
    phi_hat: float
    c_ab: float
    truth: Optional[FrameTruth]
    b2b: Optional[FrameMoments]
    frame: Optional[SampleFrame]


def b2b_seed(base_seed: int, frames: int, index: int) -> int:
    """B2B frames take the seeds after the data frames"""
    return base_seed + frames + index


def measure_b2b(moments: FrameMoments, p: ProtocolParams) -> B2BMeasurement:
    cov = moments.covariance()
    return B2BMeasurement(v_x_b2b=cov[2, 2], v_p_b2b=cov[3, 3], t=p.detector.t_output, tau=p.detector.tau)


def _b2b_moments(p: ProtocolParams, n: int, seed: int) -> FrameMoments:
    return FrameMoments.from_frame(generate_b2b_frame(p, n, seed))


def calibrate_source(p: ProtocolParams, b2b: Optional[FrameMoments]) -> SourceCalibration:
    """Coherent sources skip B2B and use the vacuum calibration"""
    if p.protocol is ProtocolKind.COHERENT or b2b is None:
        return SourceCalibration()
    return b2b_calibrate(measure_b2b(b2b, p))


def _analyse(p: ProtocolParams, frame: SampleFrame, b2b: Optional[FrameMoments], keep: bool) -> _Processed:
    theta_hat = 0.0
    if p.protocol is ProtocolKind.SQUEEZED:
        theta_hat, frame = align_quadratures(frame)
    phi_hat, frame, c_ab = remap_alice(frame)
    return _Processed(
        moments=FrameMoments.from_frame(frame),
        theta_hat=theta_hat,
        phi_hat=phi_hat,
        c_ab=c_ab,
        truth=frame.truth,
        b2b=b2b,
        frame=frame if keep else None,
    )


def _process(p: ProtocolParams, cfg: SimulationConfig, base_seed: int, keep: bool, index: int) -> _Processed:
    frame = generate_frame(p, cfg.n_per_frame, cfg.phase, base_seed + index)
    b2b = None
    if p.protocol is ProtocolKind.SQUEEZED and cfg.b2b_cadence is B2BCadence.PER_FRAME:
        b2b = _b2b_moments(p, cfg.n_per_frame, b2b_seed(base_seed, cfg.frames, index))
    return _analyse(p, frame, b2b, keep)


def _estimated_params(p: ProtocolParams, cal: SourceCalibration, est: ChannelEstimate) -> ProtocolParams:
    if p.protocol is ProtocolKind.COHERENT:
        source = SourceParams.coherent(p.source.v_m)
    else:
        source = SourceParams.squeezed(cal.v_sqz_pure, cal.delta_v_an, p.source.v_m)
    return ProtocolParams(source=source, channel=est.to_channel(), detector=p.detector)


def _spread(summaries: List[FrameSummary], estimates: List[ChannelEstimate]) -> Dict[str, Tuple[float, float]]:
    """Empirical std of per-frame estimates next to the mean formula sigma"""
    if len(summaries) < 2:
        return {}
    columns = {
        "eta": ([s.eta_hat for s in summaries], [e.sigma_eta for e in estimates]),
        "eps_x": ([s.eps_x_hat for s in summaries], [e.sigma_eps_x for e in estimates]),
        "eps_p": ([s.eps_p_hat for s in summaries], [e.sigma_eps_p for e in estimates]),
    }
    return {k: (float(np.std(v, ddof=1)), float(np.mean(s))) for k, (v, s) in columns.items()}


def _summarize(
    p: ProtocolParams,
    processed: List[_Processed],
    cal: SourceCalibration,
    seeds: Sequence[int],
    recon: Optional[ReconciliationConfig],
    budget: EstimatorBudget,
    penalty: PenaltyConfig,
    beta: Optional[float],
) -> SimulationResult:
    """Per-frame and campaign estimates, worst-case bounds and the key-rate report"""
    summaries, estimates = [], []
    for index, (r, seed) in enumerate(zip(processed, seeds)):
        frame_cal = calibrate_source(p, r.b2b) if r.b2b is not None else cal
        est = estimate_channel(r.moments, frame_cal, p.detector, p.source.v_m)
        truth = r.truth
        estimates.append(est)
        summaries.append(
            FrameSummary(
                index=index,
                seed=seed,
                n=r.moments.n,
                theta_hat=r.theta_hat,
                phi_hat=r.phi_hat,
                c_ab=r.c_ab,
                eta_hat=est.eta,
                eps_x_hat=est.eps_x,
                eps_p_hat=est.eps_p,
                theta0=truth.theta0 if truth else math.nan,
                modulation_offset=truth.modulation_offset if truth else math.nan,
            )
        )

    merged = FrameMoments.merge_all(r.moments for r in processed)
    estimate = estimate_channel(merged, cal, p.detector, p.source.v_m)
    p_est = _estimated_params(p, cal, estimate)
    worst = worst_case_from_estimate(p_est, estimate, budget.z)
    campaign_budget = budget.model_copy(update={"n": estimate.n})
    if recon is not None:
        report = operational_key_rate(p_est, recon, campaign_budget, penalty, worst=worst)
    else:
        report = report_for_beta(p_est, beta, campaign_budget, penalty, worst=worst)

    truth = [
        TruthComparison("eta", p.channel.eta, estimate.eta, estimate.sigma_eta),
        TruthComparison("eps_x", p.channel.eps_x, estimate.eps_x, estimate.sigma_eps_x),
        TruthComparison("eps_p", p.channel.eps_p, estimate.eps_p, estimate.sigma_eps_p),
        TruthComparison("v_sqz", p.source.v_sqz, cal.v_sqz_pure, math.nan),
        TruthComparison("delta_v_an", p.source.delta_v_an, cal.delta_v_an, math.nan),
    ]
    print(f"✅ Simulation finished: eta_hat={estimate.eta:.6f} K_op={report.k_operational:.6g}")
    return SimulationResult(
        report=report,
        estimate=estimate,
        calibration=cal,
        frames=summaries,
        truth=truth,
        spread=_spread(summaries, estimates),
        sample_frames=[r.frame for r in processed if r.frame is not None],
    )


def end_to_end_run(
    p: ProtocolParams,
    frames: int,
    n_per_frame: int,
    recon: Optional[ReconciliationConfig],
    seed: int,
    config: Optional[SimulationConfig] = None,
    budget: Optional[EstimatorBudget] = None,
    penalty: Optional[PenaltyConfig] = None,
    beta: Optional[float] = None,
    workers: int = 1,
    keep_frames: bool = False,
) -> SimulationResult:
    """Simulate a campaign and turn its estimates into a key-rate report

    Without a reconciliation config the report is evaluated at `beta`.
    """
    if recon is None and beta is None:
        raise InvalidArgumentError("either a reconciliation config or beta is required")
    cfg = (config or SimulationConfig()).model_copy(update={"frames": frames, "n_per_frame": n_per_frame})
    print(f"🚀 Simulating {frames} x {n_per_frame} {p.protocol.value} symbols (seed {seed})")

    processed = map_ordered(partial(_process, p, cfg, seed, keep_frames), range(frames), workers)

    campaign_b2b = None
    if p.protocol is ProtocolKind.SQUEEZED:
        if cfg.b2b_cadence is B2BCadence.PER_FRAME:
            campaign_b2b = FrameMoments.merge_all(r.b2b for r in processed)
        else:
            campaign_b2b = FrameMoments.merge_all(
                map_ordered(
                    lambda j: _b2b_moments(p, n_per_frame, b2b_seed(seed, frames, j)),
                    range(cfg.b2b_frames),
                    workers,
                )
            )
    cal = calibrate_source(p, campaign_b2b)
    seeds = [seed + index for index in range(frames)]
    return _summarize(p, processed, cal, seeds, recon, budget or EstimatorBudget(), penalty or PenaltyConfig(), beta)


def replay_run(
    p: ProtocolParams,
    frames: Sequence[SampleFrame],
    recon: Optional[ReconciliationConfig],
    b2b_frames: Sequence[SampleFrame] = (),
    budget: Optional[EstimatorBudget] = None,
    penalty: Optional[PenaltyConfig] = None,
    beta: Optional[float] = None,
    workers: int = 1,
) -> SimulationResult:
    """Run the estimation chain on stored frames instead of generated ones

    Squeezed sources are calibrated from `b2b_frames` when given, otherwise
    from the configured V_sqz and dV_AN. Stored frames carry no ground truth,
    so the truth columns compare against `p`.
    """
    if recon is None and beta is None:
        raise InvalidArgumentError("either a reconciliation config or beta is required")
    if not frames:
        raise InvalidArgumentError("no frames to replay")
    print(f"🔁 Replaying {len(frames)} stored {p.protocol.value} frames")

    processed = map_ordered(lambda f: _analyse(p, f, None, False), list(frames), workers)
    if p.protocol is ProtocolKind.COHERENT:
        cal = SourceCalibration()
    elif b2b_frames:
        cal = calibrate_source(p, FrameMoments.merge_all(FrameMoments.from_frame(f) for f in b2b_frames))
    else:
        cal = SourceCalibration(v_sqz_pure=p.source.v_sqz, delta_v_an=p.source.delta_v_an)
    seeds = [f.seed if f.seed is not None else index for index, f in enumerate(frames)]
    return _summarize(p, processed, cal, seeds, recon, budget or EstimatorBudget(), penalty or PenaltyConfig(), beta)
