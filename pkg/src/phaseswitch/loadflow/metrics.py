"""Quality-of-supply metrics: voltage unbalance, voltage extremes and losses."""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Tuple

import numpy as np

from phaseswitch.config import SLOT_HOURS
from phaseswitch.exceptions import VufUndefinedError
from phaseswitch.loadflow.sweep import LoadflowResult

logger = logging.getLogger(__name__)

ALPHA = cmath.rect(1.0, 2.0 * math.pi / 3.0)


def sequence_components(v: Sequence[complex]) -> Tuple[complex, complex, complex]:
    """Zero, positive and negative sequence components of a phasor triple."""
    va, vb, vc = (complex(x) for x in v)
    alpha2 = ALPHA * ALPHA
    v0 = (va + vb + vc) / 3.0
    v1 = (va + ALPHA * vb + alpha2 * vc) / 3.0
    v2 = (va + alpha2 * vb + ALPHA * vc) / 3.0
    return v0, v1, v2


def compute_vuf(v: Sequence[complex]) -> float:
    """Voltage unbalance factor in percent: 100 * |V2| / |V1|.

    Raises:
        VufUndefinedError: The positive-sequence component vanishes.
    """
    if len(v) != 3:
        raise ValueError("VUF needs exactly three phasors")
    _, v1, v2 = sequence_components(v)
    scale = max(abs(complex(x)) for x in v)
    if scale == 0.0 or abs(v1) <= 1e-9 * scale:
        raise VufUndefinedError("positive-sequence voltage is zero")
    return 100.0 * abs(v2) / abs(v1)


def _bus_vuf(values: np.ndarray) -> np.ndarray:
    alpha2 = ALPHA * ALPHA
    v1 = (values[:, 0] + ALPHA * values[:, 1] + alpha2 * values[:, 2]) / 3.0
    v2 = (values[:, 0] + alpha2 * values[:, 1] + ALPHA * values[:, 2]) / 3.0
    scale = np.max(np.abs(values), axis=1)
    degenerate = (scale == 0.0) | (np.abs(v1) <= 1e-9 * scale)
    if np.any(degenerate):
        raise VufUndefinedError("positive-sequence voltage is zero at some bus")
    return 100.0 * np.abs(v2) / np.abs(v1)


@dataclass(frozen=True)
class VufProfile:
    """Per-bus VUF of one solve.

    Attributes:
        bus_ids: Buses in network order.
        values: VUF in percent, aligned with ``bus_ids``.
    """

    bus_ids: Tuple[str, ...]
    values: Tuple[float, ...]

    @property
    def max(self) -> float:
        return max(self.values) if self.values else 0.0

    @property
    def mean(self) -> float:
        return float(np.mean(self.values)) if self.values else 0.0

    def __getitem__(self, bus_id: str) -> float:
        return self.values[self.bus_ids.index(bus_id)]


def _bus_mask(result: LoadflowResult, feeder_id: Optional[str]) -> np.ndarray:
    if feeder_id is None:
        return np.ones(len(result.bus_feeders), dtype=bool)
    mask = np.array([f == feeder_id for f in result.bus_feeders])
    if not mask.any():
        raise KeyError(f"no buses on feeder {feeder_id}")
    return mask


def feeder_vuf_profile(result: LoadflowResult, feeder_id: Optional[str] = None) -> VufProfile:
    """VUF at every bus (optionally restricted to one feeder) and its maximum."""
    result.require_converged()
    mask = _bus_mask(result, feeder_id)
    values = _bus_vuf(result.voltages.values[mask])
    ids = tuple(b for b, keep in zip(result.voltages.bus_ids, mask) if keep)
    return VufProfile(ids, tuple(float(x) for x in values))


def voltage_extremes(
    result: LoadflowResult, feeder_id: Optional[str] = None
) -> Tuple[float, float]:
    """Minimum and maximum phase voltage magnitude in per unit of nominal."""
    result.require_converged()
    mask = _bus_mask(result, feeder_id)
    magnitudes = result.voltages.magnitudes()[mask] / result.nominal_voltage
    return float(magnitudes.min()), float(magnitudes.max())


def feeder_losses_kw(result: LoadflowResult, feeder_id: str) -> float:
    """Active losses of the segments feeding the buses of one feeder."""
    mask = _bus_mask(result, feeder_id)[1:]
    return float(np.sum(result.segment_losses_kw[mask]))


@dataclass(frozen=True)
class LossesReport:
    """Energy summary over a horizon of slots.

    Attributes:
        line_losses_kwh: Segment losses integrated over the horizon.
        transformer_energy_kwh: Absolute net transformer power integrated.
        peak_transformer_kw: Largest absolute net transformer power.
        slots: Slots included.
        excluded_slots: Unconverged slots left out.
    """

    line_losses_kwh: float = 0.0
    transformer_energy_kwh: float = 0.0
    peak_transformer_kw: float = 0.0
    slots: int = 0
    excluded_slots: Tuple[int, ...] = ()


def losses_report(results: Iterable[LoadflowResult]) -> LossesReport:
    """Integrate losses and transformer energy over 10-minute slots.

    Transformer energy counts import and export alike (absolute net power).
    Unconverged slots are excluded with a warning.
    """
    losses = 0.0
    energy = 0.0
    peak = 0.0
    slots = 0
    excluded = []
    for result in results:
        if not result.converged:
            excluded.append(result.slot_index)
            continue
        slots += 1
        transit = abs(result.transformer_power_kw)
        losses += result.line_losses_kw * SLOT_HOURS
        energy += transit * SLOT_HOURS
        peak = max(peak, transit)
    if excluded:
        logger.warning(
            "%d unconverged slot(s) excluded from losses report: %s",
            len(excluded),
            ", ".join(str(s) for s in excluded),
        )
    return LossesReport(
        line_losses_kwh=losses,
        transformer_energy_kwh=energy,
        peak_transformer_kw=peak,
        slots=slots,
        excluded_slots=tuple(excluded),
    )


def diagnostic_rows(
    result: LoadflowResult, slot: Optional[int] = None
) -> Iterator[Tuple[int, str, str, float, float, float]]:
    """Yield (slot, bus, phase, |V|, angle in degrees, bus VUF %) rows."""
    slot = result.slot_index if slot is None else slot
    values = result.voltages.values
    try:
        vuf = _bus_vuf(values)
    except VufUndefinedError:
        vuf = np.full(len(values), float("nan"))
    for bus_id, phasors, bus_vuf in zip(result.voltages.bus_ids, values, vuf):
        for label, v in zip("abc", phasors):
            yield (slot, bus_id, label, float(abs(v)), math.degrees(cmath.phase(v)), float(bus_vuf))
