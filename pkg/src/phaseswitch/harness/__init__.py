"""Scenario orchestration, strategy comparison, economics and reports."""

from phaseswitch.harness.metrics import MetricsReport, SlotRecord, SurfaceRow
from phaseswitch.harness.runner import ScenarioRunner, run_scenario
from phaseswitch.harness.compare import (
    ComparisonRow,
    ComparisonTable,
    compare_reports,
    compare_strategies,
)
from phaseswitch.harness.economics import (
    DeploymentPlan,
    DeploymentStage,
    EconomicSummary,
    annual_value,
    economic_summary,
    plan_deployment,
)
from phaseswitch.harness.report import emit_comparison, emit_report, report_stem

__all__ = [
    "MetricsReport",
    "SlotRecord",
    "SurfaceRow",
    "ScenarioRunner",
    "run_scenario",
    "ComparisonRow",
    "ComparisonTable",
    "compare_reports",
    "compare_strategies",
    "DeploymentPlan",
    "DeploymentStage",
    "EconomicSummary",
    "annual_value",
    "economic_summary",
    "plan_deployment",
    "emit_comparison",
    "emit_report",
    "report_stem",
]
