"""Synthetic profiles, battery scheduling and per-slot market commitments."""

from phaseswitch.market.tariff import TouTariff
from phaseswitch.market.profiles import (
    Profile,
    ProfileParams,
    ProfileSet,
    export_profiles,
    generate_profiles,
    household_load,
    import_profiles,
    pv_curve,
)
from phaseswitch.market.battery import BatteryParams, BatterySchedule, BatteryState, schedule_battery
from phaseswitch.market.commitments import (
    HouseholdSchedules,
    commitments_for_slot,
    schedule_households,
)

__all__ = [
    "TouTariff",
    "Profile",
    "ProfileParams",
    "ProfileSet",
    "export_profiles",
    "generate_profiles",
    "household_load",
    "import_profiles",
    "pv_curve",
    "BatteryParams",
    "BatterySchedule",
    "BatteryState",
    "schedule_battery",
    "HouseholdSchedules",
    "commitments_for_slot",
    "schedule_households",
]
