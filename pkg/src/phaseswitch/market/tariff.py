"""Two-level time-of-use tariff."""

from dataclasses import dataclass
from typing import Any, Dict

from phaseswitch.config import SLOT_MINUTES, SLOTS_PER_DAY
from phaseswitch.exceptions import ConfigError

PRICE_LEVELS = ("low", "high")


@dataclass(frozen=True)
class TouTariff:
    """Time-of-use prices in c€/kWh.

    Hours are half-open ``[start, end)`` windows of the day. Hours covered by
    neither window are priced at ``gap_level``.

    Attributes:
        low_price: Off-peak price.
        high_price: Peak price.
        low_start_hour: Start of the off-peak window.
        low_end_hour: End of the off-peak window.
        high_start_hour: Start of the peak window.
        high_end_hour: End of the peak window.
        gap_level: ``"low"`` or ``"high"``.
    """

    low_price: float = 15.0
    high_price: float = 20.0
    low_start_hour: int = 0
    low_end_hour: int = 16
    high_start_hour: int = 17
    high_end_hour: int = 23
    gap_level: str = "low"

    def __post_init__(self) -> None:
        if self.gap_level not in PRICE_LEVELS:
            raise ConfigError(f"gap level must be one of {PRICE_LEVELS}", "tariff.gap_level")
        if self.low_price == self.high_price:
            raise ConfigError("low and high prices must differ", "tariff")
        for name in ("low_start_hour", "low_end_hour", "high_start_hour", "high_end_hour"):
            if not 0 <= getattr(self, name) <= 24:
                raise ConfigError("hours must lie in [0, 24]", f"tariff.{name}")
        if self.low_start_hour > self.low_end_hour or self.high_start_hour > self.high_end_hour:
            raise ConfigError("tariff windows must not be reversed", "tariff")
        if max(self.low_start_hour, self.high_start_hour) < min(self.low_end_hour, self.high_end_hour):
            raise ConfigError("tariff windows overlap", "tariff")

    def _hour(self, slot: int) -> float:
        return (slot % SLOTS_PER_DAY) * SLOT_MINUTES / 60.0

    def is_high(self, slot: int) -> bool:
        """True when the slot starts inside the peak window (or a gap priced high)."""
        hour = self._hour(slot)
        if self.high_start_hour <= hour < self.high_end_hour:
            return True
        if self.low_start_hour <= hour < self.low_end_hour:
            return False
        return self.gap_level == "high"

    def price_at(self, slot: int) -> float:
        return self.high_price if self.is_high(slot) else self.low_price

    def to_dict(self) -> Dict[str, Any]:
        return {
            "low_price": self.low_price,
            "high_price": self.high_price,
            "low_start_hour": self.low_start_hour,
            "low_end_hour": self.low_end_hour,
            "high_start_hour": self.high_start_hour,
            "high_end_hour": self.high_end_hour,
            "gap_level": self.gap_level,
        }
