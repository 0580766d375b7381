"""Tests for scenario definitions and bundled presets."""

import json

import pytest

from phaseswitch.config import AllocationStrategy, MarketMode, SelectionStrategy
from phaseswitch.exceptions import ConfigError
from phaseswitch.grid import Phase, load_network
from phaseswitch.scenario import (
    NETWORK_DIR,
    Placement,
    ScenarioConfig,
    list_presets,
    load_preset,
    load_scenario,
)


class TestPresets:
    """Test the bundled preset scenarios."""

    def test_list(self):
        assert list_presets() == ["A", "B", "C", "D", "Impact-33"]

    @pytest.mark.parametrize(
        "name,pv,battery",
        [("A", 15, 10), ("B", 20, 20), ("C", 25, 30), ("D", 40, 30), ("Impact-33", 17, 25)],
    )
    def test_placement_counts(self, name, pv, battery):
        scenario = load_preset(name)
        assert scenario.pv_count == pv
        assert scenario.battery_count == battery
        assert len(scenario.placement.pv) == pv
        assert len(scenario.placement.battery) == battery

    def test_placement_matches_network(self):
        for name in list_presets():
            scenario = load_preset(name)
            model = load_network(scenario.network_path())
            assert len(model.households) == scenario.household_count
            assert set(scenario.placement.participants) <= set(model.household_ids)

    def test_lv50_presets_share_profiles(self):
        shapes = {load_preset(name).profiles for name in ["A", "B", "C", "D"]}
        assert len(shapes) == 1
        shape = shapes.pop()
        assert shape.pv_kwh_per_day == 30.0
        assert (shape.base_min_kw, shape.base_max_kw) == (0.2, 0.3)

    def test_pv_gathers_on_one_phase_of_the_long_feeder(self):
        scenario = load_preset("A")
        model = load_network(scenario.network_path())
        initial = model.initial_allocation()
        long_feeder = [h.id for h in model.households_on("F1") if h.id in scenario.placement.pv]
        assert len(long_feeder) == 9
        assert {initial.phase_of(hid) for hid in long_feeder} == {Phase.A}

    def test_case_insensitive(self):
        assert load_preset("impact-33").name == "Impact-33"

    def test_unknown(self):
        with pytest.raises(ConfigError):
            load_preset("Z")


class TestScenarioConfig:
    """Test scenario validation and serialization."""

    def test_defaults(self):
        scenario = ScenarioConfig(name="x")
        assert scenario.network == "lv50"
        assert scenario.days == 6
        assert scenario.selection == SelectionStrategy.MB
        assert scenario.allocation == AllocationStrategy.DYNAMIC

    def test_counts_round_half_up(self):
        scenario = ScenarioConfig(name="x", household_count=33, pv_fraction=0.5152)
        assert scenario.pv_count == 17
        assert ScenarioConfig(name="x", household_count=10, pv_fraction=0.25).pv_count == 3

    def test_invalid_values(self):
        with pytest.raises(ConfigError):
            ScenarioConfig(name="x", pv_fraction=1.5)
        with pytest.raises(ConfigError):
            ScenarioConfig(name="x", budget=-1)
        with pytest.raises(ConfigError):
            ScenarioConfig(name="x", household_count=2, budget=3)
        with pytest.raises(ConfigError):
            ScenarioConfig(name="")

    def test_placement_must_match_fractions(self):
        with pytest.raises(ConfigError):
            ScenarioConfig(
                name="x", household_count=4, pv_fraction=0.5, placement=Placement(("h1",), ())
            )

    def test_duplicate_placement(self):
        with pytest.raises(ConfigError):
            Placement(("h1", "h1"), ())

    def test_round_trip(self):
        scenario = load_preset("B")
        assert ScenarioConfig.from_dict(scenario.to_dict()) == scenario

    def test_unknown_keys(self):
        with pytest.raises(ConfigError) as exc:
            ScenarioConfig.from_dict({"name": "x", "bogus": 1})
        assert "bogus" in str(exc.value)
        with pytest.raises(ConfigError):
            ScenarioConfig.from_dict({"name": "x", "tariff": {"peak": 30}})

    def test_bad_enum(self):
        with pytest.raises(ConfigError):
            ScenarioConfig.from_dict({"name": "x", "selection": "random"})

    def test_replace_accepts_strings(self):
        scenario = ScenarioConfig(name="x").replace(
            selection="haf", allocation="static", market_mode="no_der", budget=2
        )
        assert scenario.selection == SelectionStrategy.HAF
        assert scenario.allocation == AllocationStrategy.STATIC
        assert scenario.market_mode == MarketMode.NO_DER
        assert scenario.budget == 2

    def test_random_placement_is_seeded(self):
        ids = ["h{0}".format(i) for i in range(10)]
        scenario = ScenarioConfig(
            name="x", household_count=10, pv_fraction=0.3, battery_fraction=0.5, seed=4
        )
        first = scenario.resolve_placement(ids)
        assert first == scenario.resolve_placement(list(reversed(ids)))
        assert len(first.pv) == 3
        assert len(first.battery) == 5
        with pytest.raises(ConfigError):
            scenario.resolve_placement(ids[:5])

    def test_network_path(self, tmp_path):
        assert ScenarioConfig(name="x").network_path() == NETWORK_DIR / "lv50.json"
        (tmp_path / "mine.json").write_text("{}")
        scenario = ScenarioConfig(name="x", network="mine.json")
        assert scenario.network_path(tmp_path) == tmp_path / "mine.json"
        with pytest.raises(ConfigError):
            ScenarioConfig(name="x", network="absent").network_path(tmp_path)

    def test_load_scenario(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text(json.dumps({"name": "s", "days": 1, "budget": 2, "selection": "hybrid"}))
        scenario = load_scenario(path)
        assert scenario.days == 1
        assert scenario.selection == SelectionStrategy.HYBRID
        with pytest.raises(ConfigError):
            load_scenario(tmp_path / "missing.json")
