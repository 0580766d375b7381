"""Unbalanced load flow and quality-of-supply metrics."""

from phaseswitch.loadflow.sweep import BusVoltages, LoadflowResult, LoadflowStatus, solve_feeder
from phaseswitch.loadflow.metrics import (
    LossesReport,
    VufProfile,
    compute_vuf,
    diagnostic_rows,
    feeder_losses_kw,
    feeder_vuf_profile,
    losses_report,
    sequence_components,
    voltage_extremes,
)

__all__ = [
    "BusVoltages",
    "LoadflowResult",
    "LoadflowStatus",
    "solve_feeder",
    "LossesReport",
    "VufProfile",
    "compute_vuf",
    "diagnostic_rows",
    "feeder_losses_kw",
    "feeder_vuf_profile",
    "losses_report",
    "sequence_components",
    "voltage_extremes",
]
