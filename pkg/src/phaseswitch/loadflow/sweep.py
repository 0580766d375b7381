"""Unbalanced three-phase backward/forward sweep load flow for radial feeders."""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from phaseswitch.config import Config
from phaseswitch.exceptions import LoadflowError
from phaseswitch.grid.allocation import PhaseAllocation, SlotFlows, validate_allocation
from phaseswitch.grid.feeder import FeederModel

logger = logging.getLogger(__name__)


class LoadflowStatus(Enum):
    """Outcome of a load-flow solve."""

    CONVERGED = "converged"
    NOT_CONVERGED = "not_converged"
    VOLTAGE_COLLAPSE = "voltage_collapse"


class BusVoltages:
    """Phase-to-neutral phasors (volts) of every bus, in network bus order."""

    __slots__ = ("_ids", "_values", "_index")

    def __init__(self, bus_ids: Sequence[str], values: np.ndarray) -> None:
        values = np.array(values, dtype=complex)
        if values.shape != (len(bus_ids), 3):
            raise ValueError(f"expected {len(bus_ids)} x 3 phasors, got {values.shape}")
        values.setflags(write=False)
        self._ids = tuple(bus_ids)
        self._values = values
        self._index = {b: i for i, b in enumerate(self._ids)}

    @property
    def bus_ids(self) -> Tuple[str, ...]:
        return self._ids

    @property
    def values(self) -> np.ndarray:
        return self._values

    def __getitem__(self, bus_id: str) -> np.ndarray:
        return self._values[self._index[bus_id]]

    def __len__(self) -> int:
        return len(self._ids)

    def magnitudes(self) -> np.ndarray:
        return np.abs(self._values)


@dataclass(frozen=True)
class LoadflowResult:
    """Result of :func:`solve_feeder`.

    Attributes:
        voltages: Bus voltages at the last iterate.
        segment_currents: Phase currents (A) of the segment feeding each non-slack bus.
        neutral_currents: Neutral return current (A) of each segment.
        segment_losses_kw: Active losses per segment.
        line_losses_kw: Total active losses on all segments.
        slack_power_kva: Complex power injected by the slack (kW + j kvar).
        load_power_kva: Complex power delivered to households.
        status: Convergence status.
        iterations: Sweeps performed.
        mismatches: Max voltage change (pu) of each sweep.
        bus_feeders: Feeder id of each bus (None for the slack/busbar).
        nominal_voltage: Per-unit base in volts.
        slot_index: Slot of the solved flows.
    """

    voltages: BusVoltages
    segment_currents: np.ndarray
    neutral_currents: np.ndarray
    segment_losses_kw: np.ndarray
    line_losses_kw: float
    slack_power_kva: complex
    load_power_kva: complex
    status: LoadflowStatus
    iterations: int
    mismatches: Tuple[float, ...]
    bus_feeders: Tuple[Optional[str], ...]
    nominal_voltage: float = 230.0
    slot_index: int = 0

    @property
    def converged(self) -> bool:
        return self.status == LoadflowStatus.CONVERGED

    @property
    def transformer_power_kw(self) -> float:
        """Net active power through the transformer (positive = import)."""
        return self.slack_power_kva.real

    def require_converged(self) -> None:
        if not self.converged:
            raise LoadflowError(
                f"slot {self.slot_index}: load flow {self.status.value} after {self.iterations} iterations"
            )


def _load_powers(model: FeederModel, alloc: PhaseAllocation, flows: SlotFlows) -> np.ndarray:
    """Complex constant-power demand per bus and phase, in VA."""
    demand = np.zeros((len(model.buses), 3), dtype=complex)
    for house in model.households:
        p_watts = flows[house.id] * 1000.0
        if house.power_factor < 1.0:
            q_watts = p_watts * math.tan(math.acos(house.power_factor))
        else:
            q_watts = 0.0
        demand[model.bus_index(house.bus), alloc.phase_of(house.id)] += complex(p_watts, q_watts)
    return demand


def solve_feeder(
    model: FeederModel,
    alloc: PhaseAllocation,
    flows: SlotFlows,
    config: Optional[Config] = None,
) -> LoadflowResult:
    """Solve the unbalanced load flow of one slot.

    Loads are constant power. Each sweep converts loads to currents at the
    present voltages, accumulates them leaf to root and recomputes voltages
    root to leaf with phase and neutral drops. Starts flat at the slack
    voltage and stops when the largest voltage change falls below the
    tolerance.

    Args:
        model: Radial network.
        alloc: Valid phase allocation covering every household of the model.
        flows: Household powers of the slot.
        config: Tolerance, iteration cap and collapse floor.

    Returns:
        LoadflowResult; non-convergence and collapse are reported in ``status``.
    """
    config = config or Config.default()
    validate_allocation(alloc, model.household_ids).raise_if_invalid()
    flows.require(model.household_ids)

    nominal = model.nominal_voltage
    demand = _load_powers(model, alloc, flows)
    tree = model.subtree_matrix
    z, zn = model.series_impedances
    slack = np.array(model.slack_voltage, dtype=complex)

    voltages = np.tile(slack, (len(model.buses), 1))
    loaded = demand != 0
    load_currents = np.zeros_like(demand)
    branch = np.zeros_like(demand)
    mismatches = []
    status = LoadflowStatus.NOT_CONVERGED
    iterations = 0

    for iterations in range(1, config.max_iterations + 1):
        load_currents = np.zeros_like(demand)
        load_currents[loaded] = np.conj(demand[loaded] / voltages[loaded])
        # Backward sweep: current of the segment feeding each bus.
        branch = tree @ load_currents
        drops = z[:, None] * branch + (zn * branch.sum(axis=1))[:, None]
        # Forward sweep: accumulate drops along the path from the slack.
        updated = slack[None, :] - tree.T @ drops
        mismatch = float(np.max(np.abs(updated - voltages))) / nominal
        mismatches.append(mismatch)
        voltages = updated
        if np.min(np.abs(voltages)) < config.voltage_floor_pu * nominal:
            status = LoadflowStatus.VOLTAGE_COLLAPSE
            break
        if mismatch < config.tolerance_pu:
            status = LoadflowStatus.CONVERGED
            break

    if status != LoadflowStatus.CONVERGED:
        logger.debug(
            "slot %d: load flow %s after %d iterations (last mismatch %.3g pu)",
            flows.slot_index,
            status.value,
            iterations,
            mismatches[-1] if mismatches else float("nan"),
        )

    segment_currents = branch[1:]
    neutral = segment_currents.sum(axis=1)
    segment_losses = (
        z[1:].real * np.sum(np.abs(segment_currents) ** 2, axis=1)
        + zn[1:].real * np.abs(neutral) ** 2
    ) / 1000.0
    slack_power = complex(np.sum(voltages[0] * np.conj(branch[0]))) / 1000.0
    load_power = complex(np.sum(voltages * np.conj(load_currents))) / 1000.0

    return LoadflowResult(
        voltages=BusVoltages(model.bus_ids, voltages),
        segment_currents=segment_currents,
        neutral_currents=neutral,
        segment_losses_kw=segment_losses,
        line_losses_kw=float(np.sum(segment_losses)),
        slack_power_kva=slack_power,
        load_power_kva=load_power,
        status=status,
        iterations=iterations,
        mismatches=tuple(mismatches),
        bus_feeders=tuple(b.feeder_id for b in model.buses),
        nominal_voltage=nominal,
        slot_index=flows.slot_index,
    )
