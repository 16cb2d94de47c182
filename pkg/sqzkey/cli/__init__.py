"""
Command-line front end
"""

from sqzkey.cli.commands import cmd_calibrate, cmd_keyrate, cmd_simulate, cmd_sweep
from sqzkey.cli.config import RunConfig, RunMode, Scenario, SweepAxis, load_config, parse_config, to_ini
from sqzkey.cli.sweeps import apply_point, evaluate, grid, run_sweep

__all__ = [
    "RunConfig",
    "RunMode",
    "Scenario",
    "SweepAxis",
    "apply_point",
    "cmd_calibrate",
    "cmd_keyrate",
    "cmd_simulate",
    "cmd_sweep",
    "evaluate",
    "grid",
    "load_config",
    "parse_config",
    "run_sweep",
    "to_ini",
]
