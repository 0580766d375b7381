"""Household net flows and the per-slot commitments handed to the allocator."""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from phaseswitch.allocator.problem import CommitmentSet
from phaseswitch.config import MarketMode
from phaseswitch.exceptions import FlowError
from phaseswitch.grid.allocation import SlotFlows
from phaseswitch.grid.household import Household
from phaseswitch.market.battery import BatteryParams, BatterySchedule, schedule_battery
from phaseswitch.market.profiles import Profile, ProfileSet
from phaseswitch.market.tariff import TouTariff

logger = logging.getLogger(__name__)

FlowSource = Union[BatterySchedule, Profile, np.ndarray, Sequence[float]]


@dataclass(frozen=True)
class HouseholdSchedules:
    """Signed net flow (kW, positive = import) of every household over the horizon.

    Attributes:
        net: Household id -> net flow per slot.
        soc: Household id -> state-of-charge trajectory, battery households only.
        mode: Market mode the flows were produced under.
    """

    net: Mapping[str, np.ndarray]
    soc: Mapping[str, np.ndarray]
    mode: MarketMode = MarketMode.MARKET

    @property
    def slots(self) -> int:
        return len(next(iter(self.net.values()))) if self.net else 0

    def slot_flows(self, slot: int) -> SlotFlows:
        """Power of every household in one slot."""
        return SlotFlows(slot, {hid: float(values[slot]) for hid, values in self.net.items()})

    def averages(self) -> Dict[str, float]:
        """Horizon-average signed power per household."""
        return {hid: float(np.mean(values)) if len(values) else 0.0 for hid, values in self.net.items()}


def schedule_households(
    households: Iterable[Household],
    profiles: ProfileSet,
    battery: BatteryParams = BatteryParams(),
    tariff: TouTariff = TouTariff(),
    mode: MarketMode = MarketMode.MARKET,
) -> HouseholdSchedules:
    """Net flows of all households under ``mode``.

    ``MARKET`` runs the battery scheduler, ``NO_MARKET`` keeps batteries idle
    and ``NO_DER`` ignores PV and batteries altogether.
    """
    net: Dict[str, np.ndarray] = {}
    soc: Dict[str, np.ndarray] = {}
    zero_pv = Profile.zeros(profiles.slots).values
    for house in households:
        load = profiles.load(house.id).values
        pv = profiles.pv.values if house.has_pv and mode != MarketMode.NO_DER else zero_pv
        if house.has_battery and mode == MarketMode.MARKET:
            schedule = schedule_battery(
                load, pv, battery.state(), tariff, grid_charging=battery.grid_charging
            )
            net[house.id] = schedule.net
            soc[house.id] = schedule.soc
        else:
            net[house.id] = load - pv
    logger.info("scheduled %d households (%s)", len(net), mode.value)
    return HouseholdSchedules(net, soc, mode)


def _net_values(source: FlowSource) -> np.ndarray:
    if isinstance(source, BatterySchedule):
        return source.net
    if isinstance(source, Profile):
        return source.values
    return np.asarray(source, dtype=float)


def commitments_for_slot(
    schedules: Union[HouseholdSchedules, Mapping[str, FlowSource]],
    slot: int,
    participants: Sequence[str],
    feeder: Optional[str] = None,
) -> CommitmentSet:
    """Signed commitments of ``participants`` for one slot.

    Raises:
        FlowError: A participant has no schedule or the schedule ends before ``slot``.
    """
    flows = schedules.net if isinstance(schedules, HouseholdSchedules) else schedules
    missing = [hid for hid in participants if hid not in flows]
    if missing:
        raise FlowError("no schedule for market participant", missing)
    entries = []
    for hid in participants:
        values = _net_values(flows[hid])
        if not 0 <= slot < len(values):
            raise FlowError(f"schedule does not cover slot {slot}", [hid])
        entries.append((hid, float(values[slot])))
    return CommitmentSet(slot, tuple(entries), feeder)
