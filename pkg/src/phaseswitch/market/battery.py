"""Ideal household battery driven by a greedy self-consumption / TOU rule."""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, Iterator, Union

import numpy as np

from phaseswitch.config import SLOT_HOURS
from phaseswitch.exceptions import ConfigError, ProfileError
from phaseswitch.market.profiles import Profile
from phaseswitch.market.tariff import TouTariff

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BatteryParams:
    """Battery sizing shared by all battery households.

    Attributes:
        capacity_kwh: Usable energy.
        power_limit_kw: Charge and discharge power cap.
        initial_soc_kwh: State of charge at the start of the horizon.
        grid_charging: Allow charging from the grid during off-peak slots.
    """

    capacity_kwh: float = 6.0
    power_limit_kw: float = 3.0
    initial_soc_kwh: float = 0.0
    grid_charging: bool = False

    def __post_init__(self) -> None:
        if self.capacity_kwh < 0:
            raise ConfigError("capacity must be non-negative", "battery.capacity_kwh")
        if self.power_limit_kw < 0:
            raise ConfigError("power limit must be non-negative", "battery.power_limit_kw")
        if not 0 <= self.initial_soc_kwh <= self.capacity_kwh:
            raise ConfigError("initial state of charge outside [0, capacity]", "battery.initial_soc_kwh")

    def state(self) -> "BatteryState":
        return BatteryState(self.capacity_kwh, self.initial_soc_kwh, self.power_limit_kw)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class BatteryState:
    """Battery at a slot boundary.

    Attributes:
        capacity_kwh: Usable energy.
        soc_kwh: Stored energy, within ``[0, capacity_kwh]``.
        power_limit_kw: Charge and discharge power cap.
    """

    capacity_kwh: float = 6.0
    soc_kwh: float = 0.0
    power_limit_kw: float = 3.0

    def __post_init__(self) -> None:
        if self.capacity_kwh < 0 or self.power_limit_kw < 0:
            raise ConfigError("battery capacity and power limit must be non-negative", "battery")
        if not 0 <= self.soc_kwh <= self.capacity_kwh:
            raise ConfigError(
                f"state of charge {self.soc_kwh} outside [0, {self.capacity_kwh}]", "battery.soc_kwh"
            )


@dataclass(frozen=True)
class BatterySchedule:
    """Outcome of :func:`schedule_battery`.

    ``net`` is signed: positive imports from the grid, negative exports.
    ``soc`` has one more entry than ``net`` (the value before each slot and
    after the last one). Unpacks as ``net, soc``.
    """

    net: np.ndarray
    soc: np.ndarray
    charge: np.ndarray
    discharge: np.ndarray

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter((self.net, self.soc))

    def __len__(self) -> int:
        return len(self.net)


def _values(profile: Union[Profile, np.ndarray]) -> np.ndarray:
    return profile.values if isinstance(profile, Profile) else np.asarray(profile, dtype=float)


def schedule_battery(
    load: Union[Profile, np.ndarray],
    pv: Union[Profile, np.ndarray],
    battery: BatteryState,
    tariff: TouTariff = TouTariff(),
    grid_charging: bool = False,
) -> BatterySchedule:
    """Greedy slot-by-slot dispatch of one household.

    In each slot PV first serves the local load; surplus charges the battery
    within its power and capacity limits and the rest is exported. Residual
    load is served from the battery during peak-price slots and imported
    otherwise. With ``grid_charging`` spare charge headroom is filled from
    the grid during off-peak slots.

    Raises:
        ProfileError: Load and PV lengths differ.
    """
    load_kw = _values(load)
    pv_kw = _values(pv)
    if len(load_kw) != len(pv_kw):
        raise ProfileError(f"load has {len(load_kw)} slots, PV has {len(pv_kw)}")

    slots = len(load_kw)
    net = np.empty(slots)
    charge = np.zeros(slots)
    discharge = np.zeros(slots)
    soc = np.empty(slots + 1)
    soc[0] = battery.soc_kwh
    level = battery.soc_kwh
    capacity = battery.capacity_kwh
    limit = battery.power_limit_kw

    for t in range(slots):
        surplus = pv_kw[t] - load_kw[t]
        if surplus > 0:
            c = min(surplus, limit, (capacity - level) / SLOT_HOURS)
            charge[t] = c
            net[t] = -(surplus - c)
        else:
            residual = -surplus
            d = 0.0
            if tariff.is_high(t):
                d = min(residual, limit, level / SLOT_HOURS)
            discharge[t] = d
            net[t] = residual - d
        if grid_charging and not tariff.is_high(t):
            extra = min(limit - charge[t], (capacity - level) / SLOT_HOURS - charge[t])
            if extra > 0:
                charge[t] += extra
                net[t] += extra
        level = min(capacity, max(0.0, level + (charge[t] - discharge[t]) * SLOT_HOURS))
        soc[t + 1] = level

    return BatterySchedule(net=net, soc=soc, charge=charge, discharge=discharge)
