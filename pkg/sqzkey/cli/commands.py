"""
Command implementations behind the sqzkey CLI
"""

import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from sqzkey.calibration import FrameMoments, b2b_calibrate
from sqzkey.cli.config import RunConfig, Scenario
from sqzkey.cli.sweeps import REPORT_COLUMNS, evaluate, run_sweep
from sqzkey.errors import ConfigError
from sqzkey.models import B2BMeasurement, KeyRateReport, ProtocolKind, SourceCalibration
from sqzkey.settings import settings
from sqzkey.simulation import SampleFrame, SimulationResult, end_to_end_run, measure_b2b, replay_run
from sqzkey.storage import FrameStore, read_csv, write_csv

logger = logging.getLogger(__name__)

REPORT_HEADER = ("protocol",) + REPORT_COLUMNS
FRAME_HEADER = (
    "frame",
    "seed",
    "n",
    "theta_hat_deg",
    "phi_hat_deg",
    "c_ab",
    "eta_hat",
    "eps_x_hat",
    "eps_p_hat",
    "theta0_deg",
    "modulation_offset_deg",
)
ESTIMATE_HEADER = ("section", "parameter", "truth", "estimate", "sigma", "delta", "delta_over_sigma")
CALIBRATION_HEADER = ("row", "v_x_b2b", "v_p_b2b", "t", "tau", "v_sqz_pure", "delta_v_an")

_TABLE = (
    ("I_AB (bits/symbol)", "i_ab"),
    ("chi (worst case)", "chi"),
    ("Delta(n)", "delta_n"),
    ("eta_low", "eta_low"),
    ("eps_up (SNU)", "eps_up"),
    ("beta", "beta"),
    ("R_punc", "r_punc"),
    ("K_asym", "k_asym"),
    ("K_finite", "k_finite"),
    ("K_operational", "k_operational"),
)


def _output_path(cfg: RunConfig, default_name: str) -> Path:
    return Path(cfg.output) if cfg.output else Path(settings.output_dir) / default_name


def _sibling(path: Path, suffix: str) -> Path:
    return path.with_name(f"{path.stem}{suffix}{path.suffix or '.csv'}")


def print_report(report: KeyRateReport) -> None:
    print(f"📊 {report.protocol.value} protocol")
    for label, key in _TABLE:
        print(f"   {label:<20} {getattr(report, key):.6g}")
    if report.throughput_excl_dsp is not None:
        print(f"   {'throughput (bit/s)':<20} {report.throughput_excl_dsp:.6g}")
    if report.no_key:
        print("   ⚠️ no positive finite-size key")


def cmd_keyrate(cfg: RunConfig) -> List[KeyRateReport]:
    """Evaluate every selected protocol at the configured operating point"""
    reports = [evaluate(cfg.scenario(kind)) for kind in cfg.protocols()]
    for report in reports:
        print_report(report)
    if cfg.output:
        write_csv(cfg.output, REPORT_HEADER, [r.as_row() for r in reports])
        print(f"✅ Report written to {cfg.output}")
    return reports


def cmd_sweep(cfg: RunConfig) -> List[KeyRateReport]:
    header, rows = run_sweep(cfg)
    path = _output_path(cfg, "sweep.csv")
    write_csv(path, header, rows)
    print(f"✅ {len(rows)} sweep rows written to {path}")
    return []


def _frame_rows(result: SimulationResult) -> List[Dict[str, Any]]:
    return [
        {
            "frame": s.index,
            "seed": s.seed,
            "n": s.n,
            "theta_hat_deg": math.degrees(s.theta_hat),
            "phi_hat_deg": math.degrees(s.phi_hat),
            "c_ab": s.c_ab,
            "eta_hat": s.eta_hat,
            "eps_x_hat": s.eps_x_hat,
            "eps_p_hat": s.eps_p_hat,
            "theta0_deg": math.degrees(s.theta0),
            "modulation_offset_deg": math.degrees(s.modulation_offset),
        }
        for s in result.frames
    ]


def _estimate_rows(result: SimulationResult) -> List[Dict[str, Any]]:
    rows: List[Dict[str, Any]] = [
        {
            "section": "truth",
            "parameter": t.parameter,
            "truth": t.truth,
            "estimate": t.estimate,
            "sigma": t.sigma,
            "delta": t.delta,
            "delta_over_sigma": t.delta_over_sigma,
        }
        for t in result.truth
    ]
    est = result.estimate
    for name in ("u_x", "u_p", "c_ab", "v_m_hat", "n", "eta_clipped", "noise_clipped"):
        rows.append({"section": "aggregate", "parameter": name, "estimate": getattr(est, name)})
    for name, (empirical, formula) in result.spread.items():
        rows.append({"section": "spread", "parameter": name, "estimate": empirical, "sigma": formula})
    return rows


def _stored_frames(directory: Path, field: str = "frames_dir") -> List[SampleFrame]:
    if not directory.is_dir():
        raise ConfigError(field, f"{directory} is not a directory")
    frames = FrameStore(directory).load_all()
    if not frames:
        raise ConfigError(field, f"{directory} holds no frame files")
    return frames


def _replay(cfg: RunConfig, scn: Scenario, directory: Path) -> SimulationResult:
    b2b_dir = directory / "b2b"
    return replay_run(
        scn.params,
        _stored_frames(directory),
        scn.recon,
        b2b_frames=_stored_frames(b2b_dir) if b2b_dir.is_dir() else (),
        budget=scn.budget,
        penalty=scn.penalty,
        beta=scn.beta,
        workers=cfg.workers,
    )


def cmd_simulate(cfg: RunConfig, frames_dir: Optional[str] = None) -> List[KeyRateReport]:
    """Run the Monte Carlo pipeline, or replay stored frames, and write frame, estimate and report tables

    With `frames_dir` the frames are read from SQZF files (one subdirectory
    per protocol when both run; squeezed B2B frames under `b2b/`).
    """
    base = _output_path(cfg, "simulation.csv")
    kinds = cfg.protocols()
    sim = cfg.simulation.to_simulation_config()
    reports = []
    for kind in kinds:
        scn = cfg.scenario(kind)
        if scn.recon is None and scn.beta is None:
            raise ConfigError("reconciliation.beta", "give beta or a reconciliation code")
        if frames_dir:
            source_dir = Path(frames_dir) / kind.value if len(kinds) > 1 else Path(frames_dir)
            result = _replay(cfg, scn, source_dir)
        else:
            result = end_to_end_run(
                scn.params,
                sim.frames,
                sim.n_per_frame,
                scn.recon,
                cfg.seed,
                config=sim,
                budget=scn.budget,
                penalty=scn.penalty,
                beta=scn.beta,
                workers=cfg.workers,
                keep_frames=sim.save_frames,
            )
        path = base if len(kinds) == 1 else _sibling(base, f"_{kind.value}")
        write_csv(path, FRAME_HEADER, _frame_rows(result))
        write_csv(_sibling(path, "_estimate"), ESTIMATE_HEADER, _estimate_rows(result))
        write_csv(_sibling(path, "_report"), REPORT_HEADER, [result.report.as_row()])
        if result.sample_frames:
            store_dir = Path(sim.frames_dir) if sim.frames_dir else path.with_name(f"{path.stem}_frames")
            if len(kinds) > 1 and sim.frames_dir:
                store_dir = store_dir / kind.value
            FrameStore(store_dir).save_all(result.sample_frames)
        print_report(result.report)
        print(f"✅ Simulation tables written next to {path}")
        reports.append(result.report)
    return reports


def _measurement(row: Dict[str, str], index: int) -> B2BMeasurement:
    values = {}
    for column in ("v_x_b2b", "v_p_b2b", "t", "tau"):
        field = f"b2b_file.row{index}.{column}"
        if column not in row or row[column] == "":
            raise ConfigError(field, "missing")
        try:
            values[column] = float(row[column])
        except ValueError as e:
            raise ConfigError(field, str(e)) from e
    try:
        return B2BMeasurement(**values)
    except ValidationError as e:
        first = e.errors()[0]
        raise ConfigError(f"b2b_file.row{index}.{first['loc'][0]}", first["msg"]) from e


def _calibrate_frames(cfg: RunConfig, frames_dir: str) -> List[SourceCalibration]:
    frames = _stored_frames(Path(frames_dir))
    p = cfg.params_for(ProtocolKind.SQUEEZED)
    m = measure_b2b(FrameMoments.merge_all(FrameMoments.from_frame(f) for f in frames), p)
    cal = b2b_calibrate(m)
    print(f"🔬 {len(frames)} frames: V_sqz_pure={cal.v_sqz_pure:.6g} dV_AN={cal.delta_v_an:.6g}")
    target = _output_path(cfg, "calibration.csv")
    write_csv(target, CALIBRATION_HEADER, [{"row": 0, **m.model_dump(), **cal.model_dump()}])
    print(f"✅ Calibration written to {target}")
    return [cal]


def cmd_calibrate(
    cfg: RunConfig, b2b_file: Optional[str] = None, frames_dir: Optional[str] = None
) -> List[SourceCalibration]:
    """Back-to-back calibration of every row of a B2B measurement file, or of stored B2B frames"""
    if frames_dir:
        return _calibrate_frames(cfg, frames_dir)
    path = b2b_file or cfg.calibration.b2b_file
    if not path:
        raise ConfigError("calibration.b2b_file", "missing")
    try:
        rows = read_csv(path)
    except OSError as e:
        raise ConfigError("calibration.b2b_file", f"cannot read {path}: {e}") from e
    if not rows:
        raise ConfigError("calibration.b2b_file", f"{path} holds no measurements")
    out, calibrations = [], []
    for index, row in enumerate(rows):
        m = _measurement(row, index)
        cal = b2b_calibrate(m)
        calibrations.append(cal)
        print(f"🔬 row {index}: V_sqz_pure={cal.v_sqz_pure:.6g} dV_AN={cal.delta_v_an:.6g}")
        out.append({"row": index, **m.model_dump(), **cal.model_dump()})
    target = _output_path(cfg, "calibration.csv")
    write_csv(target, CALIBRATION_HEADER, out)
    print(f"✅ Calibration written to {target}")
    return calibrations
