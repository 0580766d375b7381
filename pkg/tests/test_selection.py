"""Tests for the switch-placement heuristics."""

import pytest

from phaseswitch.config import Config, SelectionStrategy, VoltageReference
from phaseswitch.exceptions import ConfigError, LoadflowError
from phaseswitch.grid import Household, Phase, PhaseAllocation, SlotFlows
from phaseswitch.loadflow import solve_feeder
from phaseswitch.selection import (
    SelectionContext,
    average_phase_voltages,
    build_selection_context,
    hybrid_pool_size,
    phase_spread,
    plan_mean_based,
    select,
    select_haf,
    select_hybrid,
    select_mean_based,
)


def make_context(houses, budget, voltages=None):
    """Context from ``(id, phase, average kW, has_pv[, feeder])`` tuples."""
    households = []
    phases = {}
    averages = {}
    for entry in houses:
        hid, phase, avg, has_pv = entry[:4]
        feeder = entry[4] if len(entry) > 4 else "F1"
        households.append(
            Household(hid, feeder, "n1", has_pv=has_pv, market_participant=True)
        )
        phases[hid] = phase
        averages[hid] = avg
    if voltages is None:
        voltages = {h.feeder_id: (230.0, 230.0, 230.0) for h in households}
    return SelectionContext(
        long_run_avg_power=averages,
        per_phase_avg_voltage=voltages,
        allocation=PhaseAllocation.from_phases(phases),
        households=tuple(households),
        budget=budget,
    )


HAF_HOUSES = [
    ("p1", "a", -2.0, True),
    ("p2", "b", -4.0, True),
    ("n1", "c", 3.0, False),
    ("n2", "b", 5.0, False),
    ("n3", "a", 6.0, False),
    ("n4", "c", 1.0, False),
]
HAF_VOLTAGES = {"F1": (235.0, 230.0, 225.0)}


class TestContext:
    """Test the selection context."""

    def test_negative_budget(self):
        with pytest.raises(ConfigError):
            make_context([("h1", "a", 1.0, False)], budget=-1)

    def test_participants_sorted(self):
        ctx = make_context([("h2", "a", 1.0, False), ("h1", "b", 1.0, False)], budget=1)
        assert [h.id for h in ctx.participants()] == ["h1", "h2"]

    def test_phase_ranking(self):
        ctx = make_context(HAF_HOUSES, budget=1, voltages=HAF_VOLTAGES)
        assert ctx.phase_ranking("F1") == (Phase.A, Phase.B, Phase.C)

    def test_phase_ranking_ties(self):
        ctx = make_context(HAF_HOUSES, budget=1, voltages={"F1": (230.0, 232.0, 232.0)})
        assert ctx.phase_ranking("F1") == (Phase.B, Phase.C, Phase.A)

    def test_phase_ranking_missing_feeder(self):
        ctx = make_context(HAF_HOUSES, budget=1)
        with pytest.raises(ConfigError):
            ctx.phase_ranking("F9")


class TestMeanBased:
    """Test the Mean-Based greedy heuristic."""

    def test_single_move_balances(self):
        ctx = make_context(
            [("h1", "a", 3.0, False), ("h2", "a", 3.0, False), ("h3", "b", 3.0, False)],
            budget=2,
        )
        assert phase_spread(ctx) == pytest.approx(6.0)
        moves = plan_mean_based(ctx)
        assert len(moves) == 1
        assert moves[0].household_id == "h1"
        assert moves[0].from_phase == Phase.A
        assert moves[0].to_phase == Phase.C
        assert moves[0].spread_after == pytest.approx(0.0)
        assert select_mean_based(ctx) == ["h1"]

    def test_zero_budget(self):
        ctx = make_context([("h1", "a", 3.0, False), ("h2", "a", 3.0, False)], budget=0)
        assert select_mean_based(ctx) == []

    def test_balanced_equal_averages(self):
        ctx = make_context(
            [("h1", "a", 1.0, False), ("h2", "b", 1.0, False), ("h3", "c", 1.0, False)],
            budget=3,
        )
        assert select_mean_based(ctx) == []

    def test_feeders_are_independent(self):
        ctx = make_context(
            [
                ("f1", "a", 2.0, False, "F1"),
                ("f2", "a", 2.0, False, "F1"),
                ("g1", "b", 4.0, False, "F2"),
                ("g2", "b", 4.0, False, "F2"),
            ],
            budget=5,
        )
        assert phase_spread(ctx) == pytest.approx(12.0)
        moves = plan_mean_based(ctx)
        # Moving a 4 kW house on F2 helps most.
        assert moves[0].household_id == "g1"
        assert moves[0].spread_after == pytest.approx(8.0)
        assert [m.household_id for m in moves] == ["g1", "f1"]

    def test_picks_are_distinct(self):
        ctx = make_context(
            [("h{0}".format(i), "a", float(i), False) for i in range(1, 7)], budget=6
        )
        picks = select_mean_based(ctx)
        assert len(picks) == len(set(picks))
        assert len(picks) <= 6


class TestHaf:
    """Test the Highest-Average-Flow heuristic."""

    def test_pool_order(self):
        ctx = make_context(HAF_HOUSES, budget=10, voltages=HAF_VOLTAGES)
        assert select_haf(ctx) == ["n1", "p1", "n4", "n2"]

    def test_budget(self):
        ctx = make_context(HAF_HOUSES, budget=2, voltages=HAF_VOLTAGES)
        assert select_haf(ctx) == ["n1", "p1"]

    def test_zero_budget(self):
        ctx = make_context(HAF_HOUSES, budget=0, voltages=HAF_VOLTAGES)
        assert select_haf(ctx) == []


class TestHybrid:
    """Test the Mean-Based / HAF hybrid."""

    def test_pool_size(self):
        assert hybrid_pool_size(1) == 3
        assert hybrid_pool_size(2) == 4
        assert hybrid_pool_size(3) == 6

    def test_zero_budget(self):
        ctx = make_context(HAF_HOUSES, budget=0, voltages=HAF_VOLTAGES)
        assert select_hybrid(ctx) == []

    def test_subset_of_both_rankings(self):
        ctx = make_context(HAF_HOUSES, budget=2, voltages=HAF_VOLTAGES)
        chosen = select_hybrid(ctx)
        pool = select_mean_based(ctx.with_budget(hybrid_pool_size(2)))
        haf = select_haf(ctx.with_budget(10))
        assert len(chosen) <= 2
        assert set(chosen) <= set(pool)
        assert chosen == [hid for hid in haf if hid in chosen]

    def test_dispatch(self):
        ctx = make_context(HAF_HOUSES, budget=2, voltages=HAF_VOLTAGES)
        assert select(ctx, SelectionStrategy.MB) == select_mean_based(ctx)
        assert select(ctx, SelectionStrategy.HAF) == select_haf(ctx)
        assert select(ctx, SelectionStrategy.HYBRID) == select_hybrid(ctx)


class TestPhaseVoltages:
    """Test horizon-average phase voltages from load-flow results."""

    def _results(self, model, config=None):
        flows = SlotFlows(0, {hid: 0.0 for hid in model.household_ids})
        loaded = SlotFlows(1, dict(flows.per_house_power, h5=3.0))
        return [
            solve_feeder(model, model.initial_allocation(), flows, config),
            solve_feeder(model, model.initial_allocation(), loaded, config),
        ]

    def test_loaded_phase_lowest(self, chain):
        averages = average_phase_voltages(chain, self._results(chain))
        assert set(averages) == {"F1"}
        a, b, c = averages["F1"]
        assert b < a
        assert b < c

    def test_average_reference(self, chain):
        farthest = average_phase_voltages(chain, self._results(chain))
        spread = average_phase_voltages(chain, self._results(chain), VoltageReference.AVERAGE)
        assert spread["F1"][1] > farthest["F1"][1]

    def test_no_converged(self, chain):
        results = self._results(chain, Config(max_iterations=1))
        results = [r for r in results if not r.converged]
        with pytest.raises(LoadflowError):
            average_phase_voltages(chain, results)

    def test_build_context(self, chain):
        model = chain.with_der(pv={"h1"}, battery={"h2", "h4"})
        ctx = build_selection_context(
            model, {"h1": -1.0, "h2": 2.0, "h4": 0.5}, self._results(model), budget=1
        )
        assert [h.id for h in ctx.participants()] == ["h1", "h2", "h4"]
        assert ctx.phase_ranking("F1")[2] == Phase.B
