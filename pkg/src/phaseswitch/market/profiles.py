"""Synthetic household load and PV production profiles.

Loads have a random base level plus a morning and an evening peak whose
timing drifts from day to day. PV production is one shared clear-sky curve
(zero outside daylight) used by every PV household.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterator, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from phaseswitch.config import SLOT_HOURS, SLOTS_PER_DAY
from phaseswitch.exceptions import ConfigError, ProfileError, ReportError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


@dataclass(frozen=True)
class Profile:
    """Non-negative kW values, one per 10-minute slot."""

    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        if values.ndim != 1:
            raise ProfileError("profile must be one-dimensional")
        if not np.all(np.isfinite(values)):
            raise ProfileError("profile holds non-finite values")
        if np.any(values < 0):
            raise ProfileError("profile values must be non-negative")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, slot: int) -> float:
        return float(self.values[slot])

    @property
    def days(self) -> int:
        return len(self.values) // SLOTS_PER_DAY

    def energy_kwh(self) -> float:
        return float(np.sum(self.values) * SLOT_HOURS)

    def mean(self) -> float:
        return float(np.mean(self.values)) if len(self.values) else 0.0

    @classmethod
    def zeros(cls, slots: int) -> "Profile":
        return cls(np.zeros(slots))


@dataclass(frozen=True)
class ProfileParams:
    """Shape parameters of the synthetic profiles.

    Attributes:
        base_min_kw: Lower bound of the per-household base load.
        base_max_kw: Upper bound of the per-household base load.
        peak_min_kw: Lower bound of the peak amplitudes.
        peak_max_kw: Upper bound of the peak amplitudes.
        morning_peak_hour: Mean centre of the morning peak.
        evening_peak_hour: Mean centre of the evening peak.
        peak_width_hours: Standard deviation of the peak bumps.
        timing_jitter_hours: Day-to-day standard deviation of the peak centres.
        noise: Relative standard deviation of per-slot noise.
        pv_kwh_per_day: Daily energy of the shared PV curve.
        sunrise_hour: Start of production.
        sunset_hour: End of production.
    """

    base_min_kw: float = 0.2
    base_max_kw: float = 0.5
    peak_min_kw: float = 1.0
    peak_max_kw: float = 3.0
    morning_peak_hour: float = 7.5
    evening_peak_hour: float = 19.5
    peak_width_hours: float = 1.0
    timing_jitter_hours: float = 0.5
    noise: float = 0.1
    pv_kwh_per_day: float = 15.0
    sunrise_hour: float = 6.0
    sunset_hour: float = 21.0

    def __post_init__(self) -> None:
        if not 0 <= self.base_min_kw <= self.base_max_kw:
            raise ConfigError("need 0 <= base_min_kw <= base_max_kw", "profiles.base_min_kw")
        if not 0 <= self.peak_min_kw <= self.peak_max_kw:
            raise ConfigError("need 0 <= peak_min_kw <= peak_max_kw", "profiles.peak_min_kw")
        if self.peak_width_hours <= 0:
            raise ConfigError("peak width must be positive", "profiles.peak_width_hours")
        if self.noise < 0 or self.timing_jitter_hours < 0:
            raise ConfigError("noise and jitter must be non-negative", "profiles")
        if self.pv_kwh_per_day < 0:
            raise ConfigError("PV energy must be non-negative", "profiles.pv_kwh_per_day")
        if not 0 <= self.sunrise_hour < self.sunset_hour <= 24:
            raise ConfigError("need 0 <= sunrise < sunset <= 24", "profiles.sunrise_hour")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class ProfileSet:
    """Load profiles of every household plus the shared PV curve.

    Attributes:
        loads: Household id -> load profile, in household order.
        pv: Production profile shared by all PV households.
    """

    loads: Mapping[str, Profile]
    pv: Profile
    _ids: Tuple[str, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_ids", tuple(self.loads))
        lengths = {len(p) for p in self.loads.values()} | {len(self.pv)}
        if len(lengths) > 1:
            raise ProfileError(f"profiles have different lengths: {sorted(lengths)}")

    @property
    def household_ids(self) -> Tuple[str, ...]:
        return self._ids

    @property
    def slots(self) -> int:
        return len(self.pv)

    def __iter__(self) -> Iterator[str]:
        return iter(self._ids)

    def load(self, household_id: str) -> Profile:
        try:
            return self.loads[household_id]
        except KeyError:
            raise ProfileError(f"no load profile for household {household_id}")

    def truncated(self, slots: int) -> "ProfileSet":
        """First ``slots`` slots of every profile."""
        if slots > self.slots:
            raise ProfileError(f"profiles cover {self.slots} slots, {slots} requested")
        return ProfileSet(
            {hid: Profile(p.values[:slots]) for hid, p in self.loads.items()},
            Profile(self.pv.values[:slots]),
        )

    def as_frame(self) -> pd.DataFrame:
        """Loads as a slot-indexed frame, one column per household."""
        frame = pd.DataFrame({hid: p.values for hid, p in self.loads.items()})
        frame.index.name = "slot"
        return frame


def _slot_hours(slots: int) -> np.ndarray:
    """Hour of day at the middle of each slot."""
    return ((np.arange(slots) % SLOTS_PER_DAY) + 0.5) * SLOT_HOURS


def pv_curve(days: int, params: ProfileParams = ProfileParams()) -> Profile:
    """Shared PV production: ``sin^2`` bell between sunrise and sunset.

    The curve is scaled so that every day produces exactly
    ``params.pv_kwh_per_day``.
    """
    hours = _slot_hours(SLOTS_PER_DAY)
    span = params.sunset_hour - params.sunrise_hour
    phase = (hours - params.sunrise_hour) / span
    shape = np.where((phase > 0) & (phase < 1), np.sin(math.pi * phase) ** 2, 0.0)
    energy = float(np.sum(shape) * SLOT_HOURS)
    day = shape * (params.pv_kwh_per_day / energy) if energy > 0 else shape
    return Profile(np.tile(day, days))


def household_load(
    index: int, days: int, seed: int, params: ProfileParams = ProfileParams()
) -> Profile:
    """Load of the ``index``-th household; reproducible from ``(seed, index)``."""
    rng = np.random.default_rng([seed, index])
    base = rng.uniform(params.base_min_kw, params.base_max_kw)
    morning = rng.uniform(params.peak_min_kw, params.peak_max_kw)
    evening = rng.uniform(params.peak_min_kw, params.peak_max_kw)
    hours = _slot_hours(SLOTS_PER_DAY)
    values = np.empty(days * SLOTS_PER_DAY)
    for d in range(days):
        shifts = rng.normal(0.0, params.timing_jitter_hours, size=2)
        centre_m = params.morning_peak_hour + shifts[0]
        centre_e = params.evening_peak_hour + shifts[1]
        day = (
            base
            + morning * np.exp(-0.5 * ((hours - centre_m) / params.peak_width_hours) ** 2)
            + evening * np.exp(-0.5 * ((hours - centre_e) / params.peak_width_hours) ** 2)
        )
        day = day * (1.0 + params.noise * rng.standard_normal(SLOTS_PER_DAY))
        values[d * SLOTS_PER_DAY : (d + 1) * SLOTS_PER_DAY] = day
    return Profile(np.clip(values, 0.0, None))


def generate_profiles(
    household_ids: Sequence[str],
    days: int,
    seed: int,
    params: ProfileParams = ProfileParams(),
) -> ProfileSet:
    """Synthetic profiles for ``household_ids`` over ``days`` days."""
    if days < 0:
        raise ConfigError("horizon must be non-negative", "days")
    loads = {hid: household_load(n, days, seed, params) for n, hid in enumerate(household_ids)}
    logger.info("generated %d load profiles over %d days (seed %d)", len(loads), days, seed)
    return ProfileSet(loads, pv_curve(days, params))


def export_profiles(
    profiles: ProfileSet, loads_path: PathLike, pv_path: Optional[PathLike] = None
) -> None:
    """Write loads (one column per household, one row per slot) and the PV curve as CSV."""
    try:
        profiles.as_frame().to_csv(loads_path)
        if pv_path is not None:
            pv = pd.DataFrame({"pv": profiles.pv.values})
            pv.index.name = "slot"
            pv.to_csv(pv_path)
    except OSError as e:
        raise ReportError(f"cannot write profiles: {e.strerror}", str(e.filename or loads_path)) from e


def _read_frame(path: PathLike) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, index_col="slot")
    except (OSError, ValueError) as e:
        raise ProfileError(f"cannot read profiles from {path}: {e}") from e
    if frame.isna().to_numpy().any():
        raise ProfileError(f"{path}: missing values")
    try:
        return frame.astype(float)
    except ValueError as e:
        raise ProfileError(f"{path}: non-numeric values") from e


def import_profiles(
    loads_path: PathLike,
    pv_path: Optional[PathLike] = None,
    params: ProfileParams = ProfileParams(),
) -> ProfileSet:
    """Read profiles written by :func:`export_profiles` (or any CSV of the same shape).

    Without ``pv_path`` the synthetic PV curve of ``params`` is used; the
    horizon must then span whole days.
    """
    frame = _read_frame(loads_path)
    loads: Dict[str, Profile] = {str(col): Profile(frame[col].to_numpy()) for col in frame.columns}
    if pv_path is not None:
        pv_frame = _read_frame(pv_path)
        if "pv" not in pv_frame.columns:
            raise ProfileError(f"{pv_path}: expected a 'pv' column")
        pv = Profile(pv_frame["pv"].to_numpy())
    else:
        if len(frame) % SLOTS_PER_DAY:
            raise ProfileError(f"{loads_path}: {len(frame)} slots is not a whole number of days")
        pv = pv_curve(len(frame) // SLOTS_PER_DAY, params)
    return ProfileSet(loads, pv)
