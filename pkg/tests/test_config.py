"""Tests for configuration."""

from phaseswitch.config import (
    SLOT_HOURS,
    SLOTS_PER_DAY,
    AllocationStrategy,
    Config,
    MarketMode,
    SelectionStrategy,
    SolverType,
)


class TestConfig:
    """Test configuration options."""

    def test_default(self):
        config = Config.default()
        assert not hasattr(config, "nominal_voltage")
        assert config.solver == SolverType.AUTO
        assert config.vuf_threshold_pct == 2.0
        assert config.price_eur_per_mwh == 40.0
        assert config.max_switches_per_slot is None
        assert not config.include_background

    def test_fast(self):
        config = Config.fast()
        assert config.tolerance_pu > Config.default().tolerance_pu
        assert config.max_iterations == 50

    def test_precise(self):
        config = Config.precise()
        assert config.tolerance_pu == 1e-9
        assert config.max_iterations == 500

    def test_custom_config(self):
        config = Config(solver=SolverType.BRANCH_AND_BOUND, workers=4, max_switches_per_slot=2)
        assert config.solver == SolverType.BRANCH_AND_BOUND
        assert config.workers == 4
        assert config.max_switches_per_slot == 2


class TestEnums:
    """Test enum values used in files and on the command line."""

    def test_values(self):
        assert SelectionStrategy("hybrid") == SelectionStrategy.HYBRID
        assert AllocationStrategy("dynamic") == AllocationStrategy.DYNAMIC
        assert MarketMode("no_der") == MarketMode.NO_DER
        assert SolverType("branch_and_bound") == SolverType.BRANCH_AND_BOUND

    def test_slots(self):
        assert SLOTS_PER_DAY == 144
        assert SLOT_HOURS * SLOTS_PER_DAY == 24.0
