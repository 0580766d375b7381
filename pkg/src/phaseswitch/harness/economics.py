"""Valuation of loss reductions and switch deployment payback."""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from phaseswitch.exceptions import ConfigError, HorizonMismatchError
from phaseswitch.harness.metrics import MetricsReport

DAYS_PER_YEAR = 365.0
DEFAULT_PRICE_EUR_PER_MWH = 40.0


@dataclass(frozen=True)
class EconomicSummary:
    """Annualized loss savings of a treatment run against a baseline."""

    losses_saved_mwh_per_year: float
    value_eur_per_year: float

    def to_dict(self) -> dict:
        return {
            "losses_saved_mwh_per_year": self.losses_saved_mwh_per_year,
            "value_eur_per_year": self.value_eur_per_year,
        }


def annual_value(mwh_per_year: float, price_eur_per_mwh: float = DEFAULT_PRICE_EUR_PER_MWH) -> float:
    return mwh_per_year * price_eur_per_mwh


def economic_summary(
    baseline: MetricsReport,
    treatment: MetricsReport,
    price_eur_per_mwh: float = DEFAULT_PRICE_EUR_PER_MWH,
) -> EconomicSummary:
    """Scale the line-loss reduction of ``treatment`` to a year and price it.

    Annualization is linear in the horizon length.

    Raises:
        HorizonMismatchError: The reports cover different horizons.
    """
    if baseline.days != treatment.days or baseline.slots != treatment.slots:
        raise HorizonMismatchError(
            f"baseline covers {baseline.days} day(s), treatment {treatment.days}", "days"
        )
    if baseline.days == 0:
        return EconomicSummary(0.0, 0.0)
    saved_kwh = baseline.line_losses_kwh - treatment.line_losses_kwh
    mwh_per_year = saved_kwh / 1000.0 * DAYS_PER_YEAR / baseline.days
    return EconomicSummary(mwh_per_year, annual_value(mwh_per_year, price_eur_per_mwh))


@dataclass(frozen=True)
class DeploymentStage:
    """One step of a progressive switch roll-out.

    Attributes:
        years: Duration of the stage.
        switches_installed: Switches added at the start of the stage.
        losses_saved_mwh_per_year: Loss reduction achieved during the stage.
    """

    years: float
    switches_installed: int
    losses_saved_mwh_per_year: float

    def __post_init__(self) -> None:
        if self.years < 0:
            raise ConfigError("stage duration must be non-negative", "years")
        if self.switches_installed < 0:
            raise ConfigError("installed switches must be non-negative", "switches_installed")


@dataclass(frozen=True)
class DeploymentPlan:
    """Cumulative outcome of a roll-out.

    Attributes:
        cumulative: Per stage, (switches installed so far, savings so far in €).
        total_switches: Switches installed at the end.
        total_savings_eur: Value of all loss reductions.
        savings_per_device_eur: Savings divided by installed switches (0 without switches).
    """

    cumulative: Tuple[Tuple[int, float], ...]
    total_switches: int
    total_savings_eur: float
    savings_per_device_eur: float


def plan_deployment(
    stages: Sequence[DeploymentStage], price_eur_per_mwh: float = DEFAULT_PRICE_EUR_PER_MWH
) -> DeploymentPlan:
    """Accumulate switches and loss savings over consecutive deployment stages."""
    switches = 0
    savings = 0.0
    cumulative: List[Tuple[int, float]] = []
    for stage in stages:
        switches += stage.switches_installed
        savings += stage.years * annual_value(stage.losses_saved_mwh_per_year, price_eur_per_mwh)
        cumulative.append((switches, savings))
    per_device = savings / switches if switches else 0.0
    return DeploymentPlan(tuple(cumulative), switches, savings, per_device)
