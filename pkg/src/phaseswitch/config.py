"""Engine configuration for phaseswitch runs."""

from dataclasses import dataclass
from enum import Enum
from typing import Optional


class SelectionStrategy(Enum):
    """Heuristic used to choose the houses that receive a dynamic switch."""

    MB = "mb"
    HAF = "haf"
    HYBRID = "hybrid"


class AllocationStrategy(Enum):
    """How phases are (re)allocated over the horizon."""

    NONE = "none"
    STATIC = "static"
    DYNAMIC = "dynamic"


class MarketMode(Enum):
    """How household net flows are produced.

    Values:
        MARKET: Batteries follow the self-consumption / TOU schedule.
        NO_MARKET: DER present but batteries stay idle (net = load - pv).
        NO_DER: PV and batteries ignored (net = load).
    """

    MARKET = "market"
    NO_MARKET = "no_market"
    NO_DER = "no_der"


class SolverType(Enum):
    """Solver used for the per-slot allocation problem."""

    AUTO = "auto"
    EXHAUSTIVE = "exhaustive"
    BRANCH_AND_BOUND = "branch_and_bound"


class VoltageReference(Enum):
    """Where per-phase voltages are sampled for HAF phase ranking."""

    FARTHEST = "farthest"
    AVERAGE = "average"


class OutputFormat(Enum):
    """Report output format."""

    CSV = "csv"
    JSON = "json"
    BOTH = "both"


@dataclass
class Config:
    """Engine parameters shared by the load flow, allocator and harness.

    Attributes:
        tolerance_pu: Load-flow convergence tolerance on max voltage change.
        max_iterations: Load-flow iteration cap.
        voltage_floor_pu: Magnitude below which a solve is reported as collapsed.
        solver: Allocation solver selection.
        exhaustive_cap: Largest switchable count the exhaustive solver accepts.
        auto_exhaustive_limit: With ``SolverType.AUTO``, switchable counts up to
            this value are enumerated, larger ones go to branch and bound.
        max_switches_per_slot: Optional cap on switch operations per feeder and slot.
        include_background: Include non-participant average flows in the target.
        voltage_reference: Sampling point for HAF phase voltage ranking.
        vuf_threshold_pct: Regulatory VUF ceiling used to flag runs.
        price_eur_per_mwh: Energy price used to value loss reductions.
        workers: Worker threads for load-flow evaluation (1 = sequential).
        verbose: Log per-slot load-flow diagnostics at DEBUG level.
    """

    tolerance_pu: float = 1e-6
    max_iterations: int = 100
    voltage_floor_pu: float = 0.5
    solver: SolverType = SolverType.AUTO
    exhaustive_cap: int = 12
    auto_exhaustive_limit: int = 4
    max_switches_per_slot: Optional[int] = None
    include_background: bool = False
    voltage_reference: VoltageReference = VoltageReference.FARTHEST
    vuf_threshold_pct: float = 2.0
    price_eur_per_mwh: float = 40.0
    workers: int = 1
    verbose: bool = False

    @classmethod
    def default(cls) -> "Config":
        """Create a default configuration."""
        return cls()

    @classmethod
    def fast(cls) -> "Config":
        """Create a configuration with a looser load-flow tolerance."""
        return cls(tolerance_pu=1e-5, max_iterations=50, auto_exhaustive_limit=3)

    @classmethod
    def precise(cls) -> "Config":
        """Create a configuration with a tighter load-flow tolerance."""
        return cls(tolerance_pu=1e-9, max_iterations=500)


# Market slots are fixed at 10 minutes.
SLOT_MINUTES = 10
SLOT_HOURS = SLOT_MINUTES / 60.0
SLOTS_PER_DAY = 24 * 60 // SLOT_MINUTES
