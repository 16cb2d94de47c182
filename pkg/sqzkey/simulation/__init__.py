"""
Monte Carlo data plane
"""

from sqzkey.simulation.dsp import align_quadratures, remap_alice, remap_objective, rotate_outcomes
from sqzkey.simulation.frames import (
    FrameTruth,
    PhaseKind,
    PhaseModel,
    SampleFrame,
    b2b_params,
    generate_b2b_frame,
    generate_frame,
    rotate,
)
from sqzkey.simulation.pipeline import (
    B2BCadence,
    FrameSummary,
    SimulationConfig,
    SimulationResult,
    TruthComparison,
    calibrate_source,
    end_to_end_run,
    replay_run,
    measure_b2b,
)

__all__ = [
    "B2BCadence",
    "FrameSummary",
    "FrameTruth",
    "PhaseKind",
    "PhaseModel",
    "SampleFrame",
    "SimulationConfig",
    "SimulationResult",
    "TruthComparison",
    "align_quadratures",
    "b2b_params",
    "calibrate_source",
    "end_to_end_run",
    "generate_b2b_frame",
    "generate_frame",
    "measure_b2b",
    "remap_alice",
    "remap_objective",
    "replay_run",
    "rotate",
    "rotate_outcomes",
]
