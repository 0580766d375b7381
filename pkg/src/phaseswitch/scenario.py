"""Scenario definitions: network, DER mix, strategy, horizon and market parameters."""

import json
import logging
import math
from dataclasses import dataclass, field, fields, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Type, TypeVar, Union

import numpy as np

from phaseswitch.config import AllocationStrategy, MarketMode, SelectionStrategy
from phaseswitch.exceptions import ConfigError
from phaseswitch.market.battery import BatteryParams
from phaseswitch.market.profiles import ProfileParams
from phaseswitch.market.tariff import TouTariff

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).parent / "data"
NETWORK_DIR = DATA_DIR / "networks"
PRESET_DIR = DATA_DIR / "presets"

PathLike = Union[str, Path]
E = TypeVar("E", bound=Enum)


@dataclass(frozen=True)
class Placement:
    """Households carrying PV panels and batteries."""

    pv: Tuple[str, ...] = ()
    battery: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for name in ("pv", "battery"):
            ids = getattr(self, name)
            if len(set(ids)) != len(ids):
                raise ConfigError("duplicate household in placement", f"placement.{name}")

    @property
    def participants(self) -> Tuple[str, ...]:
        """Households owning any DER, sorted."""
        return tuple(sorted(set(self.pv) | set(self.battery)))

    def to_dict(self) -> Dict[str, List[str]]:
        return {"pv": list(self.pv), "battery": list(self.battery)}


@dataclass(frozen=True)
class ScenarioConfig:
    """One simulation run.

    Attributes:
        name: Scenario name, used for report file names.
        network: Bundled network name (e.g. ``lv50``) or path to a network file.
        household_count: Expected number of households in the network.
        pv_fraction: Share of households with PV.
        battery_fraction: Share of households with a battery.
        budget: Number of phase switches ``k``.
        selection: Switch placement heuristic.
        allocation: Allocation strategy.
        market_mode: How household net flows are produced.
        days: Horizon in days.
        seed: Seed of profiles and random DER placement.
        tariff: Time-of-use prices.
        battery: Battery sizing.
        profiles: Synthetic profile shape.
        placement: Fixed DER placement; random from ``seed`` when absent.
        description: Free text.
    """

    name: str
    network: str = "lv50"
    household_count: int = 50
    pv_fraction: float = 0.0
    battery_fraction: float = 0.0
    budget: int = 0
    selection: SelectionStrategy = SelectionStrategy.MB
    allocation: AllocationStrategy = AllocationStrategy.DYNAMIC
    market_mode: MarketMode = MarketMode.MARKET
    days: int = 6
    seed: int = 0
    tariff: TouTariff = field(default_factory=TouTariff)
    battery: BatteryParams = field(default_factory=BatteryParams)
    profiles: ProfileParams = field(default_factory=ProfileParams)
    placement: Optional[Placement] = None
    description: str = ""

    def __post_init__(self) -> None:
        if not self.name:
            raise ConfigError("scenario needs a name", "name")
        if self.household_count <= 0:
            raise ConfigError("household count must be positive", "household_count")
        for name in ("pv_fraction", "battery_fraction"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"must lie in [0, 1], got {value}", name)
        if self.budget < 0:
            raise ConfigError("switch budget must be non-negative", "budget")
        if self.budget > self.household_count:
            raise ConfigError("switch budget exceeds the household count", "budget")
        if self.days < 0:
            raise ConfigError("horizon must be non-negative", "days")
        if self.placement is not None:
            if len(self.placement.pv) != self.pv_count:
                raise ConfigError(
                    f"placement lists {len(self.placement.pv)} PV houses, fraction gives {self.pv_count}",
                    "placement.pv",
                )
            if len(self.placement.battery) != self.battery_count:
                raise ConfigError(
                    f"placement lists {len(self.placement.battery)} batteries, fraction gives {self.battery_count}",
                    "placement.battery",
                )

    @property
    def pv_count(self) -> int:
        return int(math.floor(self.pv_fraction * self.household_count + 0.5))

    @property
    def battery_count(self) -> int:
        return int(math.floor(self.battery_fraction * self.household_count + 0.5))

    def replace(self, **changes: Any) -> "ScenarioConfig":
        """Copy with some fields changed (enum fields also accept their string values)."""
        for name, enum_type in _ENUM_FIELDS.items():
            if isinstance(changes.get(name), str):
                changes[name] = _parse_enum(enum_type, changes[name], name)
        return replace(self, **changes)

    def resolve_placement(self, household_ids: Sequence[str]) -> Placement:
        """The fixed placement, or a seeded random one over ``household_ids``."""
        if self.placement is not None:
            return self.placement
        if len(household_ids) != self.household_count:
            raise ConfigError(
                f"network has {len(household_ids)} households, scenario expects {self.household_count}",
                "household_count",
            )
        rng = np.random.default_rng(self.seed)
        ordered = sorted(household_ids)
        pv = rng.choice(len(ordered), size=self.pv_count, replace=False)
        battery = rng.choice(len(ordered), size=self.battery_count, replace=False)
        return Placement(
            tuple(ordered[i] for i in sorted(pv)), tuple(ordered[i] for i in sorted(battery))
        )

    def network_path(self, base_dir: Optional[PathLike] = None) -> Path:
        """File behind ``network``: an existing path, else a bundled network name."""
        candidate = Path(self.network)
        if base_dir is not None and not candidate.is_absolute():
            relative = Path(base_dir) / candidate
            if relative.exists():
                return relative
        if candidate.exists():
            return candidate
        bundled = NETWORK_DIR / f"{self.network}.json"
        if bundled.exists():
            return bundled
        raise ConfigError(f"network {self.network!r} not found", "network")

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "name": self.name,
            "description": self.description,
            "network": self.network,
            "household_count": self.household_count,
            "pv_fraction": self.pv_fraction,
            "battery_fraction": self.battery_fraction,
            "budget": self.budget,
            "selection": self.selection.value,
            "allocation": self.allocation.value,
            "market_mode": self.market_mode.value,
            "days": self.days,
            "seed": self.seed,
            "tariff": self.tariff.to_dict(),
            "battery": self.battery.to_dict(),
            "profiles": self.profiles.to_dict(),
        }
        if self.placement is not None:
            data["placement"] = self.placement.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ScenarioConfig":
        """Build a scenario from its JSON form.

        Raises:
            ConfigError: Unknown keys, wrong types or invalid values.
        """
        if not isinstance(data, dict):
            raise ConfigError("scenario must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown keys: {', '.join(unknown)}")
        if "name" not in data:
            raise ConfigError("missing key", "name")

        kwargs: Dict[str, Any] = {}
        for key, value in data.items():
            if key in _ENUM_FIELDS:
                kwargs[key] = _parse_enum(_ENUM_FIELDS[key], value, key)
            elif key in _NESTED:
                kwargs[key] = _nested(_NESTED[key], value, key)
            elif key == "placement":
                kwargs[key] = None if value is None else _placement(value)
            else:
                kwargs[key] = value
        try:
            return cls(**kwargs)
        except TypeError as e:
            raise ConfigError(f"invalid scenario: {e}") from e


_ENUM_FIELDS: Dict[str, Type[Enum]] = {
    "selection": SelectionStrategy,
    "allocation": AllocationStrategy,
    "market_mode": MarketMode,
}

_NESTED: Dict[str, type] = {
    "tariff": TouTariff,
    "battery": BatteryParams,
    "profiles": ProfileParams,
}


def _parse_enum(enum_type: Type[E], value: Any, name: str) -> E:
    if isinstance(value, enum_type):
        return value
    try:
        return enum_type(str(value).lower())
    except ValueError:
        choices = ", ".join(m.value for m in enum_type)
        raise ConfigError(f"invalid value {value!r} (choose from {choices})", name)


def _nested(cls: type, value: Any, name: str) -> Any:
    if not isinstance(value, dict):
        raise ConfigError("expected an object", name)
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(value) - known)
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(unknown)}", name)
    try:
        return cls(**value)
    except TypeError as e:
        raise ConfigError(str(e), name) from e


def _placement(value: Any) -> Placement:
    if not isinstance(value, dict) or set(value) - {"pv", "battery"}:
        raise ConfigError("expected an object with 'pv' and 'battery' lists", "placement")
    return Placement(
        tuple(str(h) for h in value.get("pv", ())),
        tuple(str(h) for h in value.get("battery", ())),
    )


def load_scenario(path: PathLike) -> ScenarioConfig:
    """Read a scenario JSON file.

    Relative network paths are kept as written; pass the file's directory to
    :meth:`ScenarioConfig.network_path` to resolve them.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON in {path}: {e}") from e
    return ScenarioConfig.from_dict(data)


def list_presets() -> List[str]:
    """Names of the bundled preset scenarios."""
    names = []
    for path in sorted(PRESET_DIR.glob("*.json")):
        with open(path, encoding="utf-8") as fh:
            names.append(json.load(fh)["name"])
    return names


def load_preset(name: str) -> ScenarioConfig:
    """Bundled preset by name (case-insensitive), e.g. ``A`` or ``Impact-33``."""
    wanted = name.strip().lower()
    for path in sorted(PRESET_DIR.glob("*.json")):
        scenario = load_scenario(path)
        if scenario.name.lower() == wanted:
            return scenario
    raise ConfigError(f"unknown preset {name!r} (available: {', '.join(list_presets())})", "preset")
