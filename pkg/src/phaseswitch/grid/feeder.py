"""Radial three-phase feeder model: buses, line segments and attached households."""

import cmath
import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Collection, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from phaseswitch.exceptions import AllocationError, NetworkError
from phaseswitch.grid.allocation import PhaseAllocation, PhaseLike
from phaseswitch.grid.household import Household

# Direct sequence: a leads b by 120 degrees, c leads a by 120 degrees.
DEFAULT_ANGLES_DEG = (0.0, -120.0, 120.0)


def balanced_phasors(magnitude: float = 230.0) -> Tuple[complex, complex, complex]:
    """Direct-sequence balanced phasor set of the given magnitude."""
    return tuple(cmath.rect(magnitude, math.radians(a)) for a in DEFAULT_ANGLES_DEG)


@dataclass(frozen=True)
class Bus:
    """A network node.

    Attributes:
        id: Bus identifier.
        feeder_id: Feeder the bus belongs to (None for the slack and busbar).
        parent: Upstream bus id (None only for the slack bus).
    """

    id: str
    feeder_id: Optional[str] = None
    parent: Optional[str] = None


@dataclass(frozen=True)
class Segment:
    """A three-phase line section with a neutral return.

    Attributes:
        from_bus: Upstream bus id.
        to_bus: Downstream bus id.
        impedance: Per-phase series impedance in ohms.
        neutral_impedance: Neutral return impedance in ohms.
    """

    from_bus: str
    to_bus: str
    impedance: complex
    neutral_impedance: complex = 0j


@dataclass(frozen=True)
class FeederModel:
    """One transformer with one or more radial feeders.

    Buses are kept in topological order (slack first, every bus after its
    parent). Segments are aligned with buses: ``segments[k]`` feeds
    ``buses[k + 1]``.

    Attributes:
        name: Network name.
        buses: Buses in topological order.
        segments: One segment per non-slack bus, same order as ``buses[1:]``.
        slack_voltage: Per-phase slack phasors in volts.
        nominal_voltage: Phase-to-neutral base of per-unit quantities, in volts.
        households: Households attached to buses.
        initial_phases: Phase of each household at load time.
    """

    name: str
    buses: Tuple[Bus, ...]
    segments: Tuple[Segment, ...]
    households: Tuple[Household, ...]
    initial_phases: Mapping[str, PhaseLike]
    slack_voltage: Tuple[complex, complex, complex] = field(
        default_factory=balanced_phasors
    )
    nominal_voltage: float = 230.0
    _bus_index: Dict[str, int] = field(init=False, repr=False, compare=False)
    _household_index: Dict[str, Household] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_bus_index", {b.id: i for i, b in enumerate(self.buses)})
        object.__setattr__(
            self, "_household_index", {h.id: h for h in self.households}
        )
        self._validate()

    def _validate(self) -> None:
        if not self.buses:
            raise NetworkError("network has no buses")
        if self.nominal_voltage <= 0:
            raise NetworkError(f"nominal voltage must be positive, got {self.nominal_voltage}")
        if len(self._bus_index) != len(self.buses):
            raise NetworkError("duplicate bus ids")
        if self.buses[0].parent is not None:
            raise NetworkError(f"slack bus {self.buses[0].id} must not have a parent")
        if len(self.segments) != len(self.buses) - 1:
            raise NetworkError("every non-slack bus needs exactly one feeding segment")
        for position, (bus, seg) in enumerate(zip(self.buses[1:], self.segments), 1):
            if bus.parent is None:
                raise NetworkError(f"bus {bus.id} has no parent (second root)")
            parent_pos = self._bus_index.get(bus.parent)
            if parent_pos is None or parent_pos >= position:
                raise NetworkError(f"bus {bus.id} is not downstream of {bus.parent}")
            if seg.to_bus != bus.id or seg.from_bus != bus.parent:
                raise NetworkError(f"segment {seg.from_bus}->{seg.to_bus} misaligned with bus {bus.id}")
            if seg.impedance.real < 0 or seg.neutral_impedance.real < 0:
                raise NetworkError(f"segment {seg.from_bus}->{seg.to_bus} has negative resistance")
        if len(self._household_index) != len(self.households):
            raise NetworkError("duplicate household ids")
        for house in self.households:
            bus_pos = self._bus_index.get(house.bus)
            if bus_pos is None:
                raise NetworkError(f"household {house.id} attached to unknown bus {house.bus}")
            if bus_pos == 0:
                raise NetworkError(f"household {house.id} attached to the slack bus")
            if self.buses[bus_pos].feeder_id != house.feeder_id:
                raise NetworkError(f"household {house.id} feeder does not match bus {house.bus}")
        missing = [h.id for h in self.households if h.id not in self.initial_phases]
        if missing:
            raise NetworkError(f"households without initial phase: {', '.join(missing)}")

    @property
    def slack(self) -> Bus:
        return self.buses[0]

    @property
    def bus_ids(self) -> Tuple[str, ...]:
        return tuple(b.id for b in self.buses)

    @property
    def household_ids(self) -> Tuple[str, ...]:
        return tuple(h.id for h in self.households)

    @property
    def feeders(self) -> Tuple[str, ...]:
        """Feeder ids in order of first appearance."""
        seen: List[str] = []
        for bus in self.buses:
            if bus.feeder_id is not None and bus.feeder_id not in seen:
                seen.append(bus.feeder_id)
        return tuple(seen)

    def bus_index(self, bus_id: str) -> int:
        return self._bus_index[bus_id]

    def parent_indices(self) -> np.ndarray:
        """Parent position of each bus (-1 for the slack)."""
        return np.array(
            [-1] + [self._bus_index[b.parent] for b in self.buses[1:]], dtype=int
        )

    @cached_property
    def subtree_matrix(self) -> np.ndarray:
        """``T[k, j] = 1`` when bus ``j`` lies in the subtree rooted at bus ``k``."""
        n = len(self.buses)
        parents = self.parent_indices()
        tree = np.eye(n)
        # Topological order: children always come after parents.
        for pos in range(n - 1, 0, -1):
            tree[parents[pos]] += tree[pos]
        tree.setflags(write=False)
        return tree

    @cached_property
    def series_impedances(self) -> Tuple[np.ndarray, np.ndarray]:
        """Phase and neutral impedance of the segment feeding each bus (0 at the slack)."""
        z = np.zeros(len(self.buses), dtype=complex)
        zn = np.zeros(len(self.buses), dtype=complex)
        z[1:] = [s.impedance for s in self.segments]
        zn[1:] = [s.neutral_impedance for s in self.segments]
        z.setflags(write=False)
        zn.setflags(write=False)
        return z, zn

    def household(self, household_id: str) -> Household:
        try:
            return self._household_index[household_id]
        except KeyError:
            raise AllocationError("unknown household", [household_id])

    def households_on(self, feeder_id: str) -> Tuple[Household, ...]:
        return tuple(h for h in self.households if h.feeder_id == feeder_id)

    def buses_on(self, feeder_id: str) -> Tuple[Bus, ...]:
        return tuple(b for b in self.buses if b.feeder_id == feeder_id)

    def path_to(self, bus_id: str) -> Tuple[str, ...]:
        """Bus ids from the slack down to ``bus_id`` inclusive."""
        path = [bus_id]
        parent = self.buses[self._bus_index[bus_id]].parent
        while parent is not None:
            path.append(parent)
            parent = self.buses[self._bus_index[parent]].parent
        return tuple(reversed(path))

    def depth(self, bus_id: str) -> int:
        return len(self.path_to(bus_id)) - 1

    def farthest_loaded_bus(self, feeder_id: str) -> str:
        """Loaded bus of the feeder with the largest series resistance to the slack."""
        loaded = {h.bus for h in self.households_on(feeder_id)}
        if not loaded:
            raise NetworkError(f"feeder {feeder_id} has no households")
        resistance = self._path_resistance()
        return max(sorted(loaded), key=lambda b: (resistance[self._bus_index[b]], self.depth(b)))

    def _path_resistance(self) -> np.ndarray:
        total = np.zeros(len(self.buses))
        for pos in range(1, len(self.buses)):
            parent = self._bus_index[self.buses[pos].parent]
            total[pos] = total[parent] + self.segments[pos - 1].impedance.real
        return total

    def initial_allocation(self) -> PhaseAllocation:
        return PhaseAllocation.from_phases(
            {h.id: self.initial_phases[h.id] for h in self.households}
        )

    def market_participants(self, feeder_id: Optional[str] = None) -> Tuple[Household, ...]:
        houses = self.households if feeder_id is None else self.households_on(feeder_id)
        return tuple(h for h in houses if h.market_participant)

    def switchable_ids(self) -> Tuple[str, ...]:
        return tuple(h.id for h in self.households if h.switchable)

    def with_der(self, pv: Collection[str], battery: Collection[str]) -> "FeederModel":
        """Replace DER flags; houses with any DER become market participants."""
        unknown = sorted(set(pv).union(battery).difference(self._household_index))
        if unknown:
            raise AllocationError("DER placement on unknown households", unknown)
        houses = []
        for h in self.households:
            equipped = replace(h, has_pv=h.id in pv, has_battery=h.id in battery, switchable=False)
            houses.append(replace(equipped, market_participant=equipped.has_der))
        return replace(self, households=tuple(houses))

    def with_switches(self, household_ids: Collection[str]) -> "FeederModel":
        """Mark exactly ``household_ids`` as equipped with dynamic switches."""
        rejected = sorted(
            hid
            for hid in household_ids
            if hid not in self._household_index
            or not self._household_index[hid].market_participant
        )
        if rejected:
            raise AllocationError("only market participants can be switchable", rejected)
        houses = tuple(replace(h, switchable=h.id in household_ids) for h in self.households)
        return replace(self, households=houses)


def build_feeder_model(
    name: str,
    buses: Sequence[Bus],
    segments: Sequence[Segment],
    households: Sequence[Household],
    initial_phases: Mapping[str, PhaseLike],
    slack_voltage: Optional[Sequence[complex]] = None,
    nominal_voltage: float = 230.0,
) -> FeederModel:
    """Order buses topologically, align segments and build a FeederModel.

    Raises:
        NetworkError: Meshed, disconnected or multi-rooted topologies.
    """
    by_id: Dict[str, Bus] = {}
    for bus in buses:
        if bus.id in by_id:
            raise NetworkError(f"duplicate bus id {bus.id}")
        by_id[bus.id] = bus
    incoming: Dict[str, Segment] = {}
    children: Dict[str, List[str]] = {b.id: [] for b in buses}
    for seg in segments:
        for end in (seg.from_bus, seg.to_bus):
            if end not in by_id:
                raise NetworkError(f"segment references unknown bus {end}")
        if seg.to_bus in incoming:
            raise NetworkError(f"bus {seg.to_bus} is fed twice (meshed topology)")
        incoming[seg.to_bus] = seg
        children[seg.from_bus].append(seg.to_bus)
    roots = [b.id for b in buses if b.id not in incoming]
    if len(roots) != 1:
        raise NetworkError(f"expected exactly one slack bus, found {len(roots)}: {roots}")
    ordered: List[Bus] = []
    ordered_segments: List[Segment] = []
    stack = [roots[0]]
    seen = set()
    while stack:
        bus_id = stack.pop()
        if bus_id in seen:
            raise NetworkError(f"cycle through bus {bus_id}")
        seen.add(bus_id)
        parent = incoming[bus_id].from_bus if bus_id in incoming else None
        ordered.append(replace(by_id[bus_id], parent=parent))
        if parent is not None:
            ordered_segments.append(incoming[bus_id])
        stack.extend(reversed(children[bus_id]))
    if len(ordered) != len(buses):
        unreachable = sorted(set(by_id).difference(seen))
        raise NetworkError(f"buses not reachable from the slack (meshed or disconnected): {unreachable}")
    kwargs = {}
    if slack_voltage is not None:
        if len(slack_voltage) != 3:
            raise NetworkError("slack voltage needs three phasors")
        kwargs["slack_voltage"] = tuple(complex(v) for v in slack_voltage)
    return FeederModel(
        name=name,
        buses=tuple(ordered),
        segments=tuple(ordered_segments),
        households=tuple(households),
        initial_phases=dict(initial_phases),
        nominal_voltage=nominal_voltage,
        **kwargs,
    )
