"""End-to-end tests of the scenario runner and strategy comparison."""

import json
import math

import numpy as np
import pytest

from phaseswitch.config import SLOT_HOURS, SLOTS_PER_DAY, AllocationStrategy, Config
from phaseswitch.exceptions import ConfigError, HorizonMismatchError, ProfileError
from phaseswitch.harness import (
    ScenarioRunner,
    compare_reports,
    compare_strategies,
    run_scenario,
)
from phaseswitch.market import Profile, ProfileSet
from phaseswitch.scenario import ScenarioConfig
from tests.conftest import chain_network


@pytest.fixture
def network_file(tmp_path):
    """Six houses on a three-bus chain, one per phase at every bus pair."""
    path = tmp_path / "chain.json"
    path.write_text(json.dumps(chain_network("chain", houses_per_bus=2, r=0.01, x=0.005, r_neutral=0.01)))
    return path


@pytest.fixture
def balanced_file(tmp_path):
    path = tmp_path / "balanced.json"
    path.write_text(json.dumps(chain_network("balanced", houses_per_bus=3, r=0.01, x=0.005)))
    return path


def scenario(network_file, **changes):
    base = ScenarioConfig(
        name="small",
        network=str(network_file),
        household_count=6,
        pv_fraction=0.5,
        battery_fraction=0.5,
        budget=2,
        days=1,
        seed=1,
    )
    return base.replace(**changes)


def rows(report):
    return [record.row() for record in report.series]


class TestRunner:
    """Test single scenario runs."""

    def test_balanced_flat_load(self, balanced_file):
        ids = ["h{0}".format(i) for i in range(1, 10)]
        profiles = ProfileSet(
            {hid: Profile(np.full(SLOTS_PER_DAY, 1.0)) for hid in ids}, Profile.zeros(SLOTS_PER_DAY)
        )
        config = scenario(
            balanced_file,
            household_count=9,
            pv_fraction=0.0,
            battery_fraction=0.0,
            budget=0,
            allocation="none",
        )
        report = run_scenario(config, profiles=profiles)
        assert report.converged
        assert report.peak_vuf_pct < 1e-6
        assert report.switch_operations == 0

    def test_zero_budget_matches_no_switching(self, network_file):
        dynamic = run_scenario(scenario(network_file, budget=0))
        none = run_scenario(scenario(network_file, budget=0, allocation="none"))
        assert dynamic.peak_vuf_pct == none.peak_vuf_pct
        assert dynamic.mean_vuf_pct == none.mean_vuf_pct
        assert dynamic.line_losses_kwh == none.line_losses_kwh
        assert rows(dynamic) == rows(none)
        assert dynamic.selected == ()

    def test_deterministic(self, network_file):
        first = run_scenario(scenario(network_file))
        second = run_scenario(scenario(network_file))
        assert first == second
        assert rows(first) == rows(second)

    def test_workers_do_not_change_results(self, network_file):
        sequential = run_scenario(scenario(network_file))
        threaded = run_scenario(scenario(network_file), Config(workers=3))
        assert rows(sequential) == rows(threaded)

    def test_dynamic_never_worse_than_keeping(self, network_file):
        report = run_scenario(scenario(network_file))
        assert len(report.selected) <= 2
        decided = [r for r in report.series if r.objective is not None]
        assert len(decided) == SLOTS_PER_DAY
        for record in decided:
            assert record.objective <= record.keep_objective + 1e-9
        assert report.switch_operations == sum(r.switches for r in report.series)

    def test_switch_cap(self, network_file):
        report = run_scenario(scenario(network_file), Config(max_switches_per_slot=1))
        assert all(r.switches <= 1 for r in report.series)

    def test_static(self, network_file):
        report = run_scenario(scenario(network_file, allocation="static"))
        assert report.switch_operations == len(report.selected)
        assert all(r.switches == 0 for r in report.series)
        assert all(r.objective is not None and r.objective == r.keep_objective for r in report.series)

    @pytest.mark.parametrize("selection", ["haf", "hybrid"])
    def test_voltage_based_selection(self, network_file, selection):
        report = run_scenario(scenario(network_file, selection=selection))
        assert report.selection == selection
        assert len(report.selected) <= 2
        assert report.converged

    def test_series_shape(self, network_file):
        report = run_scenario(scenario(network_file))
        assert report.slots == SLOTS_PER_DAY
        assert report.feeders == ("F1",)
        assert len(report.series) == SLOTS_PER_DAY
        assert {r.feeder for r in report.surface} == {"F1"}
        assert {r.position for r in report.surface} == {1, 2, 3}

    def test_transformer_energy(self, network_file):
        config = scenario(network_file, pv_fraction=0.0, battery_fraction=0.0, allocation="none", budget=0)
        runner = ScenarioRunner(config)
        model = runner.load_model()
        profiles = runner.profiles(model)
        demand = sum(profiles.load(hid).energy_kwh() for hid in model.household_ids)
        report = runner.run()
        assert report.transformer_energy_kwh == pytest.approx(demand, rel=0.01)
        assert report.transformer_energy_kwh > demand
        assert report.line_losses_kwh == pytest.approx(report.transformer_energy_kwh - demand, rel=1e-2)

    def test_no_der_means_no_participants(self, network_file):
        report = run_scenario(scenario(network_file, market_mode="no_der", pv_fraction=0.0, battery_fraction=0.0))
        assert report.switch_operations == 0
        assert report.selected == ()

    def test_unconverged_slots_reported(self, network_file):
        report = run_scenario(scenario(network_file, budget=0), Config(max_iterations=1))
        assert not report.converged
        assert report.unconverged_slots
        bad = [r for r in report.series if not r.converged]
        assert all(math.isnan(r.peak_vuf_pct) for r in bad)

    def test_household_count_mismatch(self, network_file):
        with pytest.raises(ConfigError):
            run_scenario(scenario(network_file, household_count=7, pv_fraction=0.0, battery_fraction=0.0, budget=0))

    def test_short_profiles(self, network_file):
        ids = ["h{0}".format(i) for i in range(1, 7)]
        profiles = ProfileSet({hid: Profile(np.ones(10)) for hid in ids}, Profile.zeros(10))
        with pytest.raises(ProfileError):
            run_scenario(scenario(network_file), profiles=profiles)

    def test_losses_integrate_series(self, network_file):
        report = run_scenario(scenario(network_file, budget=0, allocation="none"))
        feeder_kwh = sum(r.losses_kw for r in report.series) * SLOT_HOURS
        assert feeder_kwh == pytest.approx(report.line_losses_kwh)


class TestCompare:
    """Test comparison against the no-switching baseline."""

    def test_compare_strategies(self, network_file):
        table = compare_strategies(
            [scenario(network_file), scenario(network_file, allocation="static")]
        )
        assert table.baseline.strategy == AllocationStrategy.NONE.value
        assert len(table.rows) == 3
        first = table.rows[0]
        assert first.delta_peak_vuf_pct == 0.0
        assert first.delta_losses_kwh == 0.0
        frame = table.to_frame()
        assert list(frame["strategy"]) == ["none", "dynamic", "static"]

    def test_explicit_baseline_is_reused(self, network_file):
        baseline = scenario(network_file, allocation="none", budget=0)
        table = compare_strategies([baseline, scenario(network_file)])
        assert len(table.rows) == 2
        assert table.reports[0] is table.baseline

    def test_threshold_flags(self, network_file):
        baseline = run_scenario(scenario(network_file, allocation="none", budget=0))
        table = compare_reports(baseline, [baseline], threshold_pct=-1.0)
        assert len(table.flagged) == 1

    def test_horizon_mismatch(self, network_file):
        with pytest.raises(HorizonMismatchError):
            compare_strategies([scenario(network_file), scenario(network_file, days=2)])
        short = run_scenario(scenario(network_file, budget=0, allocation="none"))
        longer = run_scenario(scenario(network_file, budget=0, allocation="none", days=2))
        with pytest.raises(HorizonMismatchError):
            compare_reports(short, [longer])

    def test_nothing_to_compare(self):
        with pytest.raises(ConfigError):
            compare_strategies([])

    def test_loss_savings_priced(self, network_file):
        table = compare_strategies(
            [scenario(network_file), scenario(network_file, allocation="static")],
            Config(price_eur_per_mwh=80.0),
        )
        assert table.rows[0].losses_saved_mwh_per_year == 0.0
        for row in table.rows:
            expected = -row.delta_losses_kwh / 1000.0 * 365.0
            assert row.losses_saved_mwh_per_year == pytest.approx(expected)
            assert row.value_eur_per_year == pytest.approx(80.0 * expected)
        assert "value_eur_per_year" in table.to_frame().columns

    def test_relative_networks_per_scenario(self, network_file):
        relative = scenario(network_file, network=network_file.name)
        table = compare_strategies([relative, relative.replace(allocation="static")], base_dirs=[network_file.parent] * 2)
        assert len(table.rows) == 3
        with pytest.raises(ConfigError):
            compare_strategies([relative], base_dirs=[network_file.parent] * 2)
