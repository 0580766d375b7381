"""Outcome tests of the bundled lv50 presets over their full horizon."""

import itertools

import pytest

from phaseswitch.harness import compare_reports, run_scenario
from phaseswitch.scenario import load_preset

PRESETS = ["A", "B", "C", "D"]

# (allocation, budget) of every run compared per preset
RUNS = [("none", 0), ("dynamic", 0), ("dynamic", 3), ("dynamic", 6), ("static", 12)]


@pytest.fixture(scope="module")
def preset_runs():
    """Reports of every preset keyed by ``(preset, allocation, budget)``."""
    reports = {}
    for name in PRESETS:
        preset = load_preset(name)
        for allocation, budget in RUNS:
            reports[(name, allocation, budget)] = run_scenario(
                preset.replace(allocation=allocation, budget=budget)
            )
    return reports


def summed_objective(report):
    return sum(r.objective for r in report.series if r.objective is not None)


@pytest.mark.timeout(600)
@pytest.mark.parametrize("name", PRESETS)
class TestPresetOutcomes:
    """Test the switching strategies against each other on the presets."""

    def test_dynamic_three_beats_no_switching(self, preset_runs, name):
        dynamic = preset_runs[(name, "dynamic", 3)]
        none = preset_runs[(name, "none", 0)]
        assert dynamic.converged and none.converged
        assert dynamic.peak_vuf_pct <= none.peak_vuf_pct

    def test_dynamic_six_beats_static_twelve(self, preset_runs, name):
        dynamic = preset_runs[(name, "dynamic", 6)]
        static = preset_runs[(name, "static", 12)]
        assert dynamic.peak_vuf_pct <= static.peak_vuf_pct

    def test_transformer_barely_affected(self, preset_runs, name):
        reports = [preset_runs[(name, allocation, budget)] for allocation, budget in RUNS]
        for first, second in itertools.combinations(reports, 2):
            assert first.transformer_energy_kwh == pytest.approx(second.transformer_energy_kwh, rel=0.01)
            assert first.transformer_peak_kw == pytest.approx(second.transformer_peak_kw, rel=0.01)

    def test_objective_falls_with_budget(self, preset_runs, name):
        totals = [summed_objective(preset_runs[(name, "dynamic", k)]) for k in (0, 3, 6)]
        assert totals[0] > 0.0
        assert totals[1] <= totals[0] * (1 + 1e-9)
        assert totals[2] <= totals[1] * (1 + 1e-9)
        assert summed_objective(preset_runs[(name, "none", 0)]) == pytest.approx(totals[0])

    def test_selections_are_nested(self, preset_runs, name):
        three = preset_runs[(name, "dynamic", 3)].selected
        six = preset_runs[(name, "dynamic", 6)].selected
        assert len(three) == 3
        assert tuple(six[:3]) == tuple(three)


@pytest.mark.timeout(600)
class TestPresetThreshold:
    """Test threshold flagging over the preset runs."""

    def test_flags_match_peaks(self, preset_runs):
        above = below = 0
        for name in PRESETS:
            baseline = preset_runs[(name, "none", 0)]
            reports = [preset_runs[(name, allocation, budget)] for allocation, budget in RUNS]
            table = compare_reports(baseline, reports, threshold_pct=2.0)
            for row in table.rows:
                assert row.exceeds_threshold == (row.peak_vuf_pct > 2.0)
            flagged = {(row.strategy, row.budget) for row in table.flagged}
            assert flagged == {
                (r.strategy, r.budget) for r in reports if r.peak_vuf_pct > 2.0
            }
            above += len(flagged)
            below += len(table.rows) - len(table.flagged)
        assert above > 0
        assert below > 0

    def test_runs_on_both_sides_of_threshold(self, preset_runs):
        assert preset_runs[("A", "none", 0)].peak_vuf_pct > 2.0
        assert all(preset_runs[(name, "dynamic", 6)].peak_vuf_pct < 2.0 for name in PRESETS)
