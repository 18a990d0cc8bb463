"""System-level simulator for HAPS-assisted small-cell switching."""

from .config import ScenarioConfig
from .simulation import RunSummary, build_scenario, run, run_sweep

__all__ = ["ScenarioConfig", "RunSummary", "build_scenario", "run", "run_sweep"]
__version__ = "0.1.0"
