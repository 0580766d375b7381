"""Households and supply phases."""

from dataclasses import dataclass
from enum import IntEnum


class Phase(IntEnum):
    """Supply phase of a single-phase household."""

    A = 0
    B = 1
    C = 2

    @property
    def label(self) -> str:
        return "abc"[self.value]

    @classmethod
    def from_label(cls, label: str) -> "Phase":
        """Parse a phase label ('a', 'b', 'c', case-insensitive)."""
        try:
            return cls("abc".index(label.strip().lower()))
        except ValueError:
            raise ValueError(f"unknown phase label {label!r}")

    def __str__(self) -> str:
        return self.label


PHASES = (Phase.A, Phase.B, Phase.C)


@dataclass(frozen=True)
class Household:
    """A single-phase household connected to a feeder bus.

    Attributes:
        id: Household identifier.
        feeder_id: Identifier of the feeder the household belongs to.
        bus: Identifier of the bus the household is attached to.
        has_pv: The household owns a PV installation.
        has_battery: The household owns a battery.
        market_participant: The household trades on the local market.
        switchable: The household is equipped with a dynamic phase switch.
        power_factor: Load power factor (1.0 = unity).
    """

    id: str
    feeder_id: str
    bus: str
    has_pv: bool = False
    has_battery: bool = False
    market_participant: bool = False
    switchable: bool = False
    power_factor: float = 1.0

    def __post_init__(self) -> None:
        if self.switchable and not self.market_participant:
            raise ValueError(
                f"household {self.id} is switchable but not a market participant"
            )
        if not 0.0 < self.power_factor <= 1.0:
            raise ValueError(f"household {self.id} power factor must be in (0, 1]")

    @property
    def has_der(self) -> bool:
        return self.has_pv or self.has_battery
