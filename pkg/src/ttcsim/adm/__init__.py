"""Antenna deployment mechanism: thermal knives, melt lines and control logic."""
from .config import AdmConfig, LineParams, knife_power_w
from .fsm import (AdmSimulator, AdmState, EventTrace, Phase, ProtocolError, TraceRecord,
                  health_check, run_scenario, simulate)
from .montecarlo import (Jitter, ReliabilityReport, draw_config, monte_carlo, sweep,
                         sweep_values)
from .scenario import FaultKind, FaultSpec, Scenario, TcKind
from .thermal import MeltLine, line_temp_step, steady_state_c

__all__ = [
    "AdmConfig", "LineParams", "knife_power_w", "AdmSimulator", "AdmState", "EventTrace",
    "Phase", "ProtocolError", "TraceRecord", "health_check", "run_scenario", "simulate",
    "Jitter", "ReliabilityReport", "draw_config", "monte_carlo", "sweep", "sweep_values", "FaultKind",
    "FaultSpec", "Scenario", "TcKind", "MeltLine", "line_temp_step", "steady_state_c",
]
