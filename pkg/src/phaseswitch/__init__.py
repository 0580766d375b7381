"""
phaseswitch - dynamic phase switching for low-voltage grids with local energy markets.

Households trading on a local market commit to their 10-minute net flows.
phaseswitch places a small number of phase switches, reallocates the switched
households every slot so that per-phase flows stay balanced, and measures the
effect on voltage unbalance, voltages and losses with an unbalanced load flow.

Example usage:
    >>> from phaseswitch import load_preset, run_scenario
    >>> report = run_scenario(load_preset("A").replace(budget=3, days=1))
    >>> print(report.peak_vuf_pct)

For more control:
    >>> from phaseswitch import Config, SolverType
    >>> report = run_scenario(scenario, config=Config(solver=SolverType.BRANCH_AND_BOUND))
"""

from phaseswitch.config import (
    AllocationStrategy,
    Config,
    MarketMode,
    OutputFormat,
    SelectionStrategy,
    SolverType,
    VoltageReference,
)
from phaseswitch.exceptions import (
    AllocationError,
    ConfigError,
    FlowError,
    HorizonMismatchError,
    InfeasibleAllocationError,
    LoadflowError,
    NetworkError,
    PhaseSwitchError,
    ProfileError,
    ReportError,
    SolverCapExceeded,
    VufUndefinedError,
)
from phaseswitch.grid import FeederModel, Household, Phase, PhaseAllocation, load_network
from phaseswitch.loadflow import LoadflowResult, compute_vuf, solve_feeder
from phaseswitch.allocator import (
    AllocationProblem,
    AllocationSolution,
    CommitmentSet,
    build_problem,
    objective_value,
    solve_branch_and_bound,
    solve_exhaustive,
)
from phaseswitch.selection import SelectionContext, select_haf, select_hybrid, select_mean_based
from phaseswitch.market import TouTariff, generate_profiles, schedule_battery
from phaseswitch.scenario import ScenarioConfig, list_presets, load_preset, load_scenario
from phaseswitch.harness import (
    MetricsReport,
    compare_strategies,
    economic_summary,
    emit_report,
    run_scenario,
)

__version__ = "0.1.0"

__all__ = [
    # Main API
    "run_scenario",
    "compare_strategies",
    "economic_summary",
    "emit_report",
    "MetricsReport",
    # Scenarios and configuration
    "ScenarioConfig",
    "list_presets",
    "load_preset",
    "load_scenario",
    "Config",
    "AllocationStrategy",
    "MarketMode",
    "OutputFormat",
    "SelectionStrategy",
    "SolverType",
    "VoltageReference",
    # Building blocks
    "FeederModel",
    "Household",
    "Phase",
    "PhaseAllocation",
    "load_network",
    "LoadflowResult",
    "compute_vuf",
    "solve_feeder",
    "AllocationProblem",
    "AllocationSolution",
    "CommitmentSet",
    "build_problem",
    "objective_value",
    "solve_branch_and_bound",
    "solve_exhaustive",
    "SelectionContext",
    "select_haf",
    "select_hybrid",
    "select_mean_based",
    "TouTariff",
    "generate_profiles",
    "schedule_battery",
    # Exceptions
    "PhaseSwitchError",
    "AllocationError",
    "ConfigError",
    "FlowError",
    "HorizonMismatchError",
    "InfeasibleAllocationError",
    "LoadflowError",
    "NetworkError",
    "ProfileError",
    "ReportError",
    "SolverCapExceeded",
    "VufUndefinedError",
    # Version
    "__version__",
]
