"""Tests for loss valuation and deployment planning."""

import pytest

from phaseswitch.exceptions import ConfigError, HorizonMismatchError
from phaseswitch.harness import (
    DeploymentStage,
    MetricsReport,
    annual_value,
    economic_summary,
    plan_deployment,
)


def report(line_losses_kwh, days=365, name="x"):
    return MetricsReport(
        scenario=name,
        strategy="dynamic",
        selection="mb",
        budget=3,
        market_mode="market",
        seed=0,
        days=days,
        slots=days * 144,
        line_losses_kwh=line_losses_kwh,
    )


class TestEconomicSummary:
    """Test annualized loss savings."""

    def test_value(self):
        summary = economic_summary(report(10000.0), report(7500.0))
        assert summary.losses_saved_mwh_per_year == pytest.approx(2.5)
        assert summary.value_eur_per_year == pytest.approx(100.0)

    def test_annualizes_short_horizons(self):
        summary = economic_summary(report(100.0, days=6), report(40.0, days=6))
        assert summary.losses_saved_mwh_per_year == pytest.approx(0.06 * 365 / 6)

    def test_no_change(self):
        summary = economic_summary(report(500.0), report(500.0))
        assert summary.losses_saved_mwh_per_year == 0.0
        assert summary.value_eur_per_year == 0.0

    def test_empty_horizon(self):
        summary = economic_summary(report(0.0, days=0), report(0.0, days=0))
        assert summary.to_dict() == {"losses_saved_mwh_per_year": 0.0, "value_eur_per_year": 0.0}

    def test_linear_in_price(self):
        cheap = economic_summary(report(10000.0), report(7500.0), price_eur_per_mwh=20.0)
        dear = economic_summary(report(10000.0), report(7500.0), price_eur_per_mwh=60.0)
        assert dear.value_eur_per_year == pytest.approx(3 * cheap.value_eur_per_year)
        assert annual_value(2.5, 40.0) == pytest.approx(100.0)

    def test_horizon_mismatch(self):
        with pytest.raises(HorizonMismatchError):
            economic_summary(report(1.0, days=6), report(1.0, days=5))


class TestDeployment:
    """Test cumulative deployment plans."""

    def test_two_stages(self):
        plan = plan_deployment(
            [DeploymentStage(5.0, 2, 5.0), DeploymentStage(5.0, 4, 5.0)], price_eur_per_mwh=40.0
        )
        assert plan.total_switches == 6
        assert plan.total_savings_eur == pytest.approx(2000.0)
        assert plan.savings_per_device_eur == pytest.approx(333.33, abs=0.01)
        assert plan.cumulative[0] == (2, pytest.approx(1000.0))

    def test_no_switches(self):
        plan = plan_deployment([])
        assert plan.total_switches == 0
        assert plan.savings_per_device_eur == 0.0

    def test_invalid_stage(self):
        with pytest.raises(ConfigError):
            DeploymentStage(-1.0, 1, 1.0)
