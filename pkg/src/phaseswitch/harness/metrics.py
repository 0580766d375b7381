"""Per-slot records and the aggregated metrics of one scenario run."""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

from phaseswitch.loadflow.metrics import LossesReport

SERIES_COLUMNS = (
    "slot",
    "feeder",
    "peak_vuf_pct",
    "mean_vuf_pct",
    "min_voltage_pu",
    "max_voltage_pu",
    "losses_kw",
    "switches",
    "objective",
    "keep_objective",
    "converged",
)

SURFACE_COLUMNS = ("slot", "feeder", "bus", "position", "vuf_pct")

SUMMARY_FIELDS = (
    "scenario",
    "strategy",
    "selection",
    "budget",
    "market_mode",
    "seed",
    "days",
    "slots",
    "feeders",
    "peak_vuf_pct",
    "mean_vuf_pct",
    "min_voltage_pu",
    "max_voltage_pu",
    "line_losses_kwh",
    "transformer_energy_kwh",
    "transformer_peak_kw",
    "switch_operations",
    "unconverged_slots",
    "selected",
)


@dataclass(frozen=True)
class SlotRecord:
    """Metrics of one feeder in one slot.

    Quality metrics are NaN when the slot's load flow did not converge.
    ``objective`` and ``keep_objective`` are the allocator's optimum and the
    value of keeping the previous allocation (dynamic runs only).
    """

    slot: int
    feeder: str
    peak_vuf_pct: float
    mean_vuf_pct: float
    min_voltage_pu: float
    max_voltage_pu: float
    losses_kw: float
    switches: int = 0
    objective: Optional[float] = None
    keep_objective: Optional[float] = None
    converged: bool = True

    def row(self) -> Tuple[Any, ...]:
        return tuple(getattr(self, name) for name in SERIES_COLUMNS)


@dataclass(frozen=True)
class SurfaceRow:
    """VUF of one bus along a feeder, for plotting VUF surfaces over time."""

    slot: int
    feeder: str
    bus: str
    position: int
    vuf_pct: float

    def row(self) -> Tuple[Any, ...]:
        return tuple(getattr(self, name) for name in SURFACE_COLUMNS)


@dataclass(frozen=True)
class MetricsReport:
    """Aggregated result of one scenario and strategy.

    Attributes:
        scenario: Scenario name.
        strategy: Allocation strategy value.
        selection: Selection heuristic value.
        budget: Switch budget.
        market_mode: Market mode value.
        seed: Random seed.
        days: Horizon in days.
        slots: Slots simulated.
        feeders: Feeder ids.
        peak_vuf_pct: Largest bus VUF over all converged slots.
        mean_vuf_pct: Mean of the per-feeder mean bus VUF over converged slots.
        min_voltage_pu: Lowest phase voltage.
        max_voltage_pu: Highest phase voltage.
        line_losses_kwh: Segment losses over the horizon.
        transformer_energy_kwh: Energy through the transformer.
        transformer_peak_kw: Peak transformer power.
        switch_operations: Phase changes performed over the horizon.
        unconverged_slots: Slots whose load flow failed.
        selected: Households given a switch (or moved, for static runs).
        series: Per-slot, per-feeder records.
        surface: VUF along the most loaded feeder.
    """

    scenario: str
    strategy: str
    selection: str
    budget: int
    market_mode: str
    seed: int
    days: int
    slots: int = 0
    feeders: Tuple[str, ...] = ()
    peak_vuf_pct: float = 0.0
    mean_vuf_pct: float = 0.0
    min_voltage_pu: float = 0.0
    max_voltage_pu: float = 0.0
    line_losses_kwh: float = 0.0
    transformer_energy_kwh: float = 0.0
    transformer_peak_kw: float = 0.0
    switch_operations: int = 0
    unconverged_slots: Tuple[int, ...] = ()
    selected: Tuple[str, ...] = ()
    series: Tuple[SlotRecord, ...] = field(default=(), repr=False, compare=False)
    surface: Tuple[SurfaceRow, ...] = field(default=(), repr=False, compare=False)

    @property
    def converged(self) -> bool:
        return not self.unconverged_slots

    def exceeds(self, threshold_pct: float) -> bool:
        return self.peak_vuf_pct > threshold_pct

    def summary(self) -> Dict[str, Any]:
        """JSON-ready summary without the series, in a fixed key order."""
        data = {name: getattr(self, name) for name in SUMMARY_FIELDS}
        data["feeders"] = list(self.feeders)
        data["unconverged_slots"] = list(self.unconverged_slots)
        data["selected"] = list(self.selected)
        return data

    @classmethod
    def from_summary(cls, data: Dict[str, Any]) -> "MetricsReport":
        kwargs = {name: data[name] for name in SUMMARY_FIELDS}
        kwargs["feeders"] = tuple(kwargs["feeders"])
        kwargs["unconverged_slots"] = tuple(kwargs["unconverged_slots"])
        kwargs["selected"] = tuple(kwargs["selected"])
        return cls(**kwargs)

    def __str__(self) -> str:
        lines = [f"Scenario: {self.scenario} ({self.strategy}, {self.selection}, k={self.budget})"]
        lines.append(f"Slots: {self.slots} over {self.days} day(s), feeders {', '.join(self.feeders)}")
        lines.append(f"VUF: peak {self.peak_vuf_pct:.3f}%, mean {self.mean_vuf_pct:.3f}%")
        lines.append(f"Voltage: {self.min_voltage_pu:.4f} .. {self.max_voltage_pu:.4f} pu")
        lines.append(
            f"Losses: {self.line_losses_kwh:.3f} kWh; transformer {self.transformer_energy_kwh:.1f} kWh, "
            f"peak {self.transformer_peak_kw:.2f} kW"
        )
        lines.append(f"Switch operations: {self.switch_operations}")
        if self.unconverged_slots:
            lines.append(f"Unconverged slots: {len(self.unconverged_slots)}")
        return "\n".join(lines)


def aggregate(
    header: Dict[str, Any],
    records: Sequence[SlotRecord],
    losses: LossesReport,
    switch_operations: int,
    selected: Sequence[str],
    surface: Sequence[SurfaceRow] = (),
    feeders: Sequence[str] = (),
    slots: int = 0,
) -> MetricsReport:
    """Fold per-slot records and energy totals into a :class:`MetricsReport`."""
    good = [r for r in records if r.converged]
    unconverged = tuple(sorted({r.slot for r in records if not r.converged}))
    if good:
        quality = dict(
            peak_vuf_pct=max(r.peak_vuf_pct for r in good),
            mean_vuf_pct=math.fsum(r.mean_vuf_pct for r in good) / len(good),
            min_voltage_pu=min(r.min_voltage_pu for r in good),
            max_voltage_pu=max(r.max_voltage_pu for r in good),
        )
    else:
        quality = {}
    return MetricsReport(
        **header,
        slots=slots,
        feeders=tuple(feeders),
        **quality,
        line_losses_kwh=losses.line_losses_kwh,
        transformer_energy_kwh=losses.transformer_energy_kwh,
        transformer_peak_kw=losses.peak_transformer_kw,
        switch_operations=switch_operations,
        unconverged_slots=unconverged,
        selected=tuple(selected),
        series=tuple(records),
        surface=tuple(surface),
    )
