"""Strategy comparison against the no-switching baseline."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Union

import pandas as pd

from phaseswitch.config import AllocationStrategy, Config
from phaseswitch.exceptions import ConfigError, HorizonMismatchError
from phaseswitch.harness.economics import DEFAULT_PRICE_EUR_PER_MWH, economic_summary
from phaseswitch.harness.metrics import MetricsReport
from phaseswitch.harness.runner import run_scenario
from phaseswitch.scenario import ScenarioConfig

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

COMPARISON_COLUMNS = (
    "scenario",
    "strategy",
    "selection",
    "budget",
    "market_mode",
    "peak_vuf_pct",
    "mean_vuf_pct",
    "delta_peak_vuf_pct",
    "delta_mean_vuf_pct",
    "delta_losses_kwh",
    "delta_min_voltage_pu",
    "delta_max_voltage_pu",
    "switch_operations",
    "losses_saved_mwh_per_year",
    "value_eur_per_year",
    "exceeds_threshold",
)


@dataclass(frozen=True)
class ComparisonRow:
    """Deltas of one run against the baseline (treatment minus baseline)."""

    scenario: str
    strategy: str
    selection: str
    budget: int
    market_mode: str
    peak_vuf_pct: float
    mean_vuf_pct: float
    delta_peak_vuf_pct: float
    delta_mean_vuf_pct: float
    delta_losses_kwh: float
    delta_min_voltage_pu: float
    delta_max_voltage_pu: float
    switch_operations: int
    losses_saved_mwh_per_year: float
    value_eur_per_year: float
    exceeds_threshold: bool

    @classmethod
    def between(
        cls,
        baseline: MetricsReport,
        report: MetricsReport,
        threshold_pct: float,
        price_eur_per_mwh: float = DEFAULT_PRICE_EUR_PER_MWH,
    ) -> "ComparisonRow":
        savings = economic_summary(baseline, report, price_eur_per_mwh)
        return cls(
            scenario=report.scenario,
            strategy=report.strategy,
            selection=report.selection,
            budget=report.budget,
            market_mode=report.market_mode,
            peak_vuf_pct=report.peak_vuf_pct,
            mean_vuf_pct=report.mean_vuf_pct,
            delta_peak_vuf_pct=report.peak_vuf_pct - baseline.peak_vuf_pct,
            delta_mean_vuf_pct=report.mean_vuf_pct - baseline.mean_vuf_pct,
            delta_losses_kwh=report.line_losses_kwh - baseline.line_losses_kwh,
            delta_min_voltage_pu=report.min_voltage_pu - baseline.min_voltage_pu,
            delta_max_voltage_pu=report.max_voltage_pu - baseline.max_voltage_pu,
            switch_operations=report.switch_operations,
            losses_saved_mwh_per_year=savings.losses_saved_mwh_per_year,
            value_eur_per_year=savings.value_eur_per_year,
            exceeds_threshold=report.exceeds(threshold_pct),
        )


@dataclass(frozen=True)
class ComparisonTable:
    """Baseline report, compared reports and their rows (baseline row first)."""

    baseline: MetricsReport
    reports: tuple
    rows: tuple
    threshold_pct: float = 2.0

    @property
    def flagged(self) -> List[ComparisonRow]:
        """Rows whose peak VUF exceeds the threshold."""
        return [row for row in self.rows if row.exceeds_threshold]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [[getattr(row, c) for c in COMPARISON_COLUMNS] for row in self.rows],
            columns=list(COMPARISON_COLUMNS),
        )


def compare_reports(
    baseline: MetricsReport,
    reports: Sequence[MetricsReport],
    threshold_pct: float = 2.0,
    price_eur_per_mwh: float = DEFAULT_PRICE_EUR_PER_MWH,
) -> ComparisonTable:
    """Tabulate ``reports`` against ``baseline`` and flag threshold violations.

    Every row also carries the annualized loss saving of its run priced at
    ``price_eur_per_mwh``.

    Raises:
        HorizonMismatchError: A report covers a different horizon than the baseline.
    """
    for report in reports:
        if report.days != baseline.days or report.slots != baseline.slots:
            raise HorizonMismatchError(
                f"{report.scenario}/{report.strategy} covers {report.days} day(s), "
                f"baseline {baseline.days}",
                "days",
            )
    rows = [ComparisonRow.between(baseline, baseline, threshold_pct, price_eur_per_mwh)]
    rows.extend(
        ComparisonRow.between(baseline, r, threshold_pct, price_eur_per_mwh)
        for r in reports
        if r is not baseline
    )
    for row in rows:
        if row.exceeds_threshold:
            logger.warning(
                "%s/%s k=%d: peak VUF %.3f%% above %.1f%%",
                row.scenario,
                row.strategy,
                row.budget,
                row.peak_vuf_pct,
                threshold_pct,
            )
    return ComparisonTable(baseline, tuple(reports), tuple(rows), threshold_pct)


def compare_strategies(
    configs: Sequence[ScenarioConfig],
    config: Optional[Config] = None,
    base_dirs: Optional[Sequence[Optional[PathLike]]] = None,
) -> ComparisonTable:
    """Run every scenario and compare it with the no-switching baseline.

    The first scenario using ``AllocationStrategy.NONE`` is the baseline;
    without one, a baseline is derived from the first scenario. Loss savings
    are priced at ``config.price_eur_per_mwh``.

    Args:
        configs: Scenarios to run.
        config: Engine configuration.
        base_dirs: Per scenario, the directory its relative network path is
            resolved against (None entries resolve against the working
            directory).

    Raises:
        ConfigError: No scenarios, or ``base_dirs`` does not match ``configs``.
        HorizonMismatchError: The scenarios cover different horizons.
    """
    if not configs:
        raise ConfigError("nothing to compare", "configs")
    if base_dirs is None:
        base_dirs = [None] * len(configs)
    if len(base_dirs) != len(configs):
        raise ConfigError(
            f"{len(base_dirs)} base directories for {len(configs)} scenarios", "base_dirs"
        )
    horizons = {c.days for c in configs}
    if len(horizons) > 1:
        raise HorizonMismatchError(f"scenarios cover different horizons: {sorted(horizons)}", "days")
    config = config or Config.default()

    pairs = list(zip(configs, base_dirs))
    baseline_cfg, baseline_dir = next(
        ((c, d) for c, d in pairs if c.allocation == AllocationStrategy.NONE), (None, None)
    )
    if baseline_cfg is None:
        baseline_cfg = configs[0].replace(allocation=AllocationStrategy.NONE, budget=0)
        baseline_dir = base_dirs[0]
    baseline = run_scenario(baseline_cfg, config, base_dir=baseline_dir)
    reports = [
        baseline if c is baseline_cfg else run_scenario(c, config, base_dir=d) for c, d in pairs
    ]
    return compare_reports(baseline, reports, config.vuf_threshold_pct, config.price_eur_per_mwh)
