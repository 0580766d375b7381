"""Tests for the backward/forward sweep load flow and supply-quality metrics."""

import cmath
import math

import numpy as np
import pytest

from phaseswitch.config import Config
from phaseswitch.exceptions import FlowError, LoadflowError, VufUndefinedError
from phaseswitch.grid import SlotFlows, network_from_dict
from phaseswitch.loadflow import (
    LoadflowStatus,
    compute_vuf,
    diagnostic_rows,
    feeder_losses_kw,
    feeder_vuf_profile,
    losses_report,
    sequence_components,
    solve_feeder,
    voltage_extremes,
)
from tests.conftest import chain_network


def polar(magnitude, degrees):
    return cmath.rect(magnitude, math.radians(degrees))


def flows_for(model, power, slot=0):
    return SlotFlows(slot, {hid: power for hid in model.household_ids})


class TestTwoBus:
    """Test the single-load case against an independent fixed point."""

    def test_matches_fixed_point(self, two_bus):
        z = complex(0.1, 0.05)
        v = complex(230.0, 0.0)
        for _ in range(200):
            v = 230.0 - z * (2000.0 / v).conjugate()
        result = solve_feeder(two_bus, two_bus.initial_allocation(), SlotFlows(0, {"h1": 2.0}))
        assert result.status == LoadflowStatus.CONVERGED
        assert abs(result.voltages["b1"][0] - v) / 230.0 < 1e-4
        assert abs(result.voltages["b1"][0]) == pytest.approx(229.1, abs=0.05)

    def test_unloaded_phases_keep_slack_voltage(self, two_bus):
        result = solve_feeder(two_bus, two_bus.initial_allocation(), SlotFlows(0, {"h1": 2.0}))
        slack = two_bus.slack_voltage
        assert abs(result.voltages["b1"][1] - slack[1]) < 1e-9
        assert abs(result.voltages["b1"][2] - slack[2]) < 1e-9

    def test_power_balance(self, two_bus):
        result = solve_feeder(two_bus, two_bus.initial_allocation(), SlotFlows(0, {"h1": 2.0}))
        assert result.slack_power_kva.real == pytest.approx(
            result.load_power_kva.real + result.line_losses_kw, rel=1e-6
        )
        assert result.load_power_kva.real == pytest.approx(2.0, rel=1e-5)

    def test_zero_load(self, two_bus):
        result = solve_feeder(two_bus, two_bus.initial_allocation(), SlotFlows(0, {"h1": 0.0}))
        assert result.converged
        assert result.line_losses_kw == 0.0
        assert voltage_extremes(result) == pytest.approx((1.0, 1.0))


class TestChain:
    """Test a loaded radial chain."""

    def test_power_balance_with_injection(self, chain):
        flows = SlotFlows(0, {"h1": 3.0, "h2": -2.0, "h3": 1.5, "h4": 4.0, "h5": -1.0, "h6": 0.5})
        result = solve_feeder(chain, chain.initial_allocation(), flows)
        assert result.converged
        assert result.slack_power_kva.real == pytest.approx(
            result.load_power_kva.real + result.line_losses_kw, rel=1e-6
        )

    def test_voltage_drops_along_feeder(self):
        model = network_from_dict(chain_network("drop", houses_per_bus=1, buses=4, phases="a"))
        result = solve_feeder(model, model.initial_allocation(), flows_for(model, 3.0))
        magnitudes = [abs(result.voltages[b][0]) for b in ("src", "n1", "n2", "n3", "n4")]
        assert magnitudes == sorted(magnitudes, reverse=True)
        assert magnitudes[0] > magnitudes[-1]

    def test_injection_raises_voltage(self):
        model = network_from_dict(chain_network("rise", houses_per_bus=1, buses=2, phases="a"))
        result = solve_feeder(model, model.initial_allocation(), flows_for(model, -4.0))
        low, high = voltage_extremes(result, "F1")
        assert high > 1.0

    def test_unbalanced_loading_has_vuf(self):
        model = network_from_dict(chain_network("vuf", houses_per_bus=1, buses=3, phases="a"))
        result = solve_feeder(model, model.initial_allocation(), flows_for(model, 3.0))
        profile = feeder_vuf_profile(result, "F1")
        assert profile.bus_ids == ("n1", "n2", "n3")
        assert profile.max == profile["n3"]
        assert profile.max > profile.mean > 0.0

    def test_balanced_loading_has_no_vuf(self):
        model = network_from_dict(chain_network("flat", houses_per_bus=3))
        result = solve_feeder(model, model.initial_allocation(), flows_for(model, 2.0))
        assert feeder_vuf_profile(result, "F1").max < 1e-6

    def test_feeder_losses_sum(self, two_feeders):
        result = solve_feeder(two_feeders, two_feeders.initial_allocation(), flows_for(two_feeders, 2.0))
        per_feeder = feeder_losses_kw(result, "F1") + feeder_losses_kw(result, "F2")
        assert per_feeder < result.line_losses_kw
        assert per_feeder == pytest.approx(result.line_losses_kw - result.segment_losses_kw[0])

    def test_missing_flow(self, chain):
        with pytest.raises(FlowError):
            solve_feeder(chain, chain.initial_allocation(), SlotFlows(0, {"h1": 1.0}))


class TestPhysics:
    """Test physical consistency of converged solves."""

    def test_doubled_impedance_increases_losses(self):
        flows = {"h1": 3.0, "h2": -1.5, "h3": 2.0, "h4": 4.0, "h5": 0.5, "h6": 1.0}
        losses = []
        for scale in (1.0, 2.0):
            data = chain_network(
                "z", houses_per_bus=2, r=0.05 * scale, x=0.02 * scale, r_neutral=0.05 * scale
            )
            model = network_from_dict(data)
            result = solve_feeder(model, model.initial_allocation(), SlotFlows(0, flows))
            assert result.converged
            losses.append(result.line_losses_kw)
        assert losses[1] > losses[0] > 0.0

    def test_vuf_grows_along_path(self):
        model = network_from_dict(chain_network("path", houses_per_bus=2, buses=5, phases="a"))
        result = solve_feeder(model, model.initial_allocation(), flows_for(model, 2.0))
        profile = feeder_vuf_profile(result, "F1")
        far = model.farthest_loaded_bus("F1")
        along = [profile[b] for b in model.path_to(far)[1:]]
        assert len(along) == 5
        assert all(later > earlier for earlier, later in zip(along, along[1:]))

    def test_complex_power_balance(self):
        data = chain_network("balance", houses_per_bus=2, buses=4, x=0.03, r_neutral=0.08)
        for house in data["households"]:
            house["power_factor"] = 0.9
        model = network_from_dict(data)
        powers = [3.0, -2.0, 1.0, 4.5, 0.5, 2.5, -1.0, 1.5]
        flows = SlotFlows(0, dict(zip(model.household_ids, powers)))
        result = solve_feeder(model, model.initial_allocation(), flows, Config.precise())
        assert result.converged
        z, zn = model.series_impedances
        phase_losses = np.sum(z[1:] * np.sum(np.abs(result.segment_currents) ** 2, axis=1))
        neutral_losses = np.sum(zn[1:] * np.abs(result.neutral_currents) ** 2)
        expected = result.load_power_kva + complex(phase_losses + neutral_losses) / 1000.0
        assert abs(result.slack_power_kva - expected) < 1e-9 * abs(result.slack_power_kva)
        assert result.slack_power_kva.imag > result.load_power_kva.imag > 0.0

    def test_per_unit_base_follows_network(self):
        data = chain_network("base", houses_per_bus=1)
        data["nominal_voltage"] = 400.0
        model = network_from_dict(data)
        result = solve_feeder(model, model.initial_allocation(), flows_for(model, 0.0))
        assert result.nominal_voltage == 400.0
        assert voltage_extremes(result) == pytest.approx((1.0, 1.0))


class TestConvergence:
    """Test non-convergence reporting."""

    def test_iteration_cap(self, chain):
        result = solve_feeder(
            chain, chain.initial_allocation(), flows_for(chain, 3.0), Config(max_iterations=1)
        )
        assert result.status == LoadflowStatus.NOT_CONVERGED
        assert result.iterations == 1
        with pytest.raises(LoadflowError):
            voltage_extremes(result)

    def test_collapse(self):
        data = chain_network("weak", houses_per_bus=1, buses=1, r=2.0, x=1.0, phases="a")
        model = network_from_dict(data)
        result = solve_feeder(model, model.initial_allocation(), flows_for(model, 500.0))
        assert not result.converged
        assert result.status in (LoadflowStatus.VOLTAGE_COLLAPSE, LoadflowStatus.NOT_CONVERGED)

    def test_losses_report_excludes_unconverged(self, chain):
        good = solve_feeder(chain, chain.initial_allocation(), flows_for(chain, 2.0, slot=0))
        bad = solve_feeder(
            chain, chain.initial_allocation(), flows_for(chain, 2.0, slot=5), Config(max_iterations=1)
        )
        report = losses_report([good, bad])
        assert report.slots == 1
        assert report.excluded_slots == (5,)
        assert report.line_losses_kwh == pytest.approx(good.line_losses_kw / 6.0)
        assert report.peak_transformer_kw == pytest.approx(abs(good.transformer_power_kw))


class TestVuf:
    """Test sequence components and VUF."""

    def test_balanced(self):
        v = [polar(230, 0), polar(230, -120), polar(230, 120)]
        assert compute_vuf(v) < 1e-9
        v0, v1, v2 = sequence_components(v)
        assert abs(v0) < 1e-9
        assert abs(v1) == pytest.approx(230.0)
        assert abs(v2) < 1e-9

    def test_hand_evaluated_case(self):
        v = [polar(230, 0), polar(230, -120), polar(220, 120)]
        assert compute_vuf(v) == pytest.approx(1.47, abs=0.01)

    def test_zero_positive_sequence(self):
        with pytest.raises(VufUndefinedError):
            compute_vuf([0j, 0j, 0j])

    def test_needs_three_phasors(self):
        with pytest.raises(ValueError):
            compute_vuf([230, 230])


class TestDiagnostics:
    """Test verbose diagnostic rows."""

    def test_rows(self, chain):
        result = solve_feeder(chain, chain.initial_allocation(), flows_for(chain, 1.0, slot=7))
        rows = list(diagnostic_rows(result))
        assert len(rows) == 4 * 3
        slot, bus, phase, magnitude, angle, vuf = rows[0]
        assert (slot, bus, phase) == (7, "src", "a")
        assert magnitude == pytest.approx(230.0)
        assert angle == pytest.approx(0.0)
