"""
Sweep grids: apply axis values to a scenario and evaluate every grid point
"""

import itertools
import logging
import math
from dataclasses import replace
from functools import partial
from typing import Any, Dict, List, Sequence, Tuple

from sqzkey.cli.config import RunConfig, Scenario
from sqzkey.errors import ConfigError, ReconciliationEfficiencyError
from sqzkey.models import KeyRateReport, ProtocolKind, ProtocolParams, updated
from sqzkey.security import operational_key_rate, report_for_beta
from sqzkey.workers import map_ordered

logger = logging.getLogger(__name__)

REPORT_COLUMNS = (
    "i_ab",
    "i_ab_worst",
    "chi_nominal",
    "chi",
    "delta_n",
    "eta_low",
    "eps_up",
    "beta",
    "r_punc",
    "k_asym",
    "k_finite",
    "k_operational",
    "throughput_excl_dsp",
    "no_key",
)

PREFIX = {ProtocolKind.SQUEEZED: "sqz", ProtocolKind.COHERENT: "coh"}

# eta-type axes first so that eps_output is referred with the swept transmittance
_ORDER = {"eta": 0, "attenuation_db": 0, "eps_output": 2}


def apply_point(scn: Scenario, point: Dict[str, float]) -> Scenario:
    """Scenario with the sweep values of one grid point substituted"""
    p = scn.params
    source, channel, detector = p.source, p.channel, p.detector
    budget, recon, beta, fer = scn.budget, scn.recon, scn.beta, scn.fer
    for name, value in sorted(point.items(), key=lambda kv: _ORDER.get(kv[0], 1)):
        if name == "beta":
            beta, recon = value, None
        elif name == "eta":
            channel = updated(channel, eta=value)
        elif name == "attenuation_db":
            channel = updated(channel, eta=10.0 ** (-value / 10.0))
        elif name == "eps":
            channel = updated(channel, eps_x=value, eps_p=value)
        elif name in ("eps_x", "eps_p"):
            channel = updated(channel, **{name: value})
        elif name == "eps_output":
            eps = value / channel.eta
            channel = updated(channel, eps_x=eps, eps_p=eps)
        elif name in ("v_m", "v_sqz", "delta_v_an"):
            source = updated(source, **{name: value})
        elif name in ("tau", "v_d"):
            detector = updated(detector, **{name: value})
        elif name == "n":
            budget = updated(budget, n=int(round(value)))
        elif name == "fer":
            fer = value
            if recon is not None:
                recon = updated(recon, fer=value)
        else:
            raise ConfigError(f"sweep.{name}", "unknown sweep variable")
    params = ProtocolParams(source=source, channel=channel, detector=detector)
    return replace(scn, params=params, budget=budget, recon=recon, beta=beta, fer=fer)


def evaluate(scn: Scenario) -> KeyRateReport:
    """Operational rate through the code when one is configured, else at beta"""
    if scn.recon is not None:
        return operational_key_rate(scn.params, scn.recon, scn.budget, scn.penalty)
    if scn.beta is None:
        raise ConfigError("reconciliation.beta", "give beta or a reconciliation code")
    return report_for_beta(scn.params, scn.beta, scn.budget, scn.penalty, scn.fer, scn.measured_mi)


def _failed_row(error: ReconciliationEfficiencyError) -> Dict[str, Any]:
    row = {col: math.nan for col in REPORT_COLUMNS}
    row.update(beta=error.beta, no_key=True, throughput_excl_dsp=None)
    return row


def _point_rows(cfg: RunConfig, kinds: Sequence[ProtocolKind], point: Dict[str, float]) -> Dict[str, Any]:
    row: Dict[str, Any] = dict(point)
    for kind in kinds:
        try:
            values = evaluate(apply_point(cfg.scenario(kind), point)).as_row()
        except ReconciliationEfficiencyError as e:
            logger.warning("%s at %s: %s", kind.value, point, e)
            values = _failed_row(e)
        row.update({f"{PREFIX[kind]}_{col}": values[col] for col in REPORT_COLUMNS})
    if len(cfg.sweep) == 2 and len(kinds) == 2:
        row["k_diff"] = row["sqz_k_finite"] - row["coh_k_finite"]
    return row


def sweep_header(cfg: RunConfig) -> List[str]:
    kinds = cfg.protocols()
    header = [axis.variable for axis in cfg.sweep]
    for kind in kinds:
        header.extend(f"{PREFIX[kind]}_{col}" for col in REPORT_COLUMNS)
    if len(cfg.sweep) == 2 and len(kinds) == 2:
        header.append("k_diff")
    return header


def grid(cfg: RunConfig) -> List[Dict[str, float]]:
    """Grid points in row-major order over the declared axes"""
    axes = cfg.sweep
    values = [[float(v) for v in axis.values()] for axis in axes]
    return [dict(zip((a.variable for a in axes), combo)) for combo in itertools.product(*values)]


def run_sweep(cfg: RunConfig) -> Tuple[List[str], List[Dict[str, Any]]]:
    if not 1 <= len(cfg.sweep) <= 2:
        raise ConfigError("sweep.axis1", "a sweep needs one or two axes")
    points = grid(cfg)
    print(f"🔧 Sweeping {len(points)} grid points on {cfg.workers} worker(s)")
    rows = map_ordered(partial(_point_rows, cfg, cfg.protocols()), points, cfg.workers)
    return sweep_header(cfg), rows
