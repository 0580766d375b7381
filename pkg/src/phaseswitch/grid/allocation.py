"""Phase allocations: the 3 x H boolean adjacency matrix of houses to phases."""

from dataclasses import dataclass
from typing import Callable, Collection, Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from phaseswitch.exceptions import AllocationError, FlowError
from phaseswitch.grid.household import Household, Phase

PhaseLike = Union[Phase, int, str]


def as_phase(value: PhaseLike) -> Phase:
    """Coerce a phase label, index or Phase into a Phase."""
    if isinstance(value, Phase):
        return value
    if isinstance(value, str):
        return Phase.from_label(value)
    return Phase(int(value))


class PhaseAllocation:
    """Boolean adjacency matrix X of households to phases.

    ``matrix[i, j]`` is true when household ``household_ids[j]`` is connected to
    phase ``i``. Instances are immutable; the matrix is stored read-only and
    may be invalid (see :func:`validate_allocation`).
    """

    __slots__ = ("_ids", "_matrix", "_index")

    def __init__(self, household_ids: Sequence[str], matrix: np.ndarray) -> None:
        ids = tuple(household_ids)
        matrix = np.array(matrix, dtype=bool)
        if matrix.ndim != 2 or matrix.shape[0] != 3:
            raise AllocationError(f"allocation matrix must be 3 x H, got {matrix.shape}")
        if matrix.shape[1] != len(ids):
            raise AllocationError(
                f"allocation matrix has {matrix.shape[1]} columns for {len(ids)} households"
            )
        if len(set(ids)) != len(ids):
            raise AllocationError("duplicate household ids in allocation")
        matrix.setflags(write=False)
        self._ids = ids
        self._matrix = matrix
        self._index = {hid: j for j, hid in enumerate(ids)}

    @classmethod
    def from_phases(cls, phases: Mapping[str, PhaseLike]) -> "PhaseAllocation":
        """Build an allocation from a household -> phase mapping (insertion order)."""
        ids = list(phases)
        matrix = np.zeros((3, len(ids)), dtype=bool)
        for j, hid in enumerate(ids):
            matrix[as_phase(phases[hid]), j] = True
        return cls(ids, matrix)

    @property
    def household_ids(self) -> Tuple[str, ...]:
        return self._ids

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    def __len__(self) -> int:
        return len(self._ids)

    def __contains__(self, household_id: object) -> bool:
        return household_id in self._index

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PhaseAllocation):
            return NotImplemented
        return self._ids == other._ids and np.array_equal(self._matrix, other._matrix)

    def __hash__(self) -> int:
        return hash((self._ids, self._matrix.tobytes()))

    def __repr__(self) -> str:
        labels = "".join(
            Phase(int(col.argmax())).label if col.sum() == 1 else "?"
            for col in self._matrix.T
        )
        return f"PhaseAllocation({labels!r})"

    def column(self, household_id: str) -> np.ndarray:
        try:
            return self._matrix[:, self._index[household_id]]
        except KeyError:
            raise AllocationError("household not in allocation", [household_id])

    def phase_of(self, household_id: str) -> Phase:
        """Phase of one household; the column must hold exactly one true entry."""
        col = self.column(household_id)
        if int(col.sum()) != 1:
            raise AllocationError("household has no unique phase", [household_id])
        return Phase(int(col.argmax()))

    def phases(self) -> Dict[str, Phase]:
        """Household -> phase mapping of a valid allocation."""
        return {hid: self.phase_of(hid) for hid in self._ids}

    def labels(self) -> str:
        """Compact phase label string, one character per household."""
        return "".join(self.phase_of(hid).label for hid in self._ids)


@dataclass(frozen=True)
class AllocationValidation:
    """Result of :func:`validate_allocation`.

    Attributes:
        violations: Households whose column does not sum to one.
    """

    violations: Tuple[str, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid

    def raise_if_invalid(self) -> None:
        if self.violations:
            raise AllocationError(
                "each household must be connected to exactly one phase",
                self.violations,
            )


def validate_allocation(
    alloc: PhaseAllocation, households: Iterable[Union[Household, str]]
) -> AllocationValidation:
    """Check that every household is connected to exactly one phase.

    Args:
        alloc: The allocation to check.
        households: Households (or ids) the allocation must cover, in order.

    Returns:
        AllocationValidation listing each violating household id.
    """
    ids = [h.id if isinstance(h, Household) else h for h in households]
    if len(ids) != len(alloc):
        raise AllocationError(
            f"allocation covers {len(alloc)} households, expected {len(ids)}"
        )
    missing = [hid for hid in ids if hid not in alloc]
    if missing:
        raise AllocationError("households missing from allocation", missing)
    violations = tuple(hid for hid in ids if int(alloc.column(hid).sum()) != 1)
    return AllocationValidation(violations)


def apply_phase_decisions(
    current: PhaseAllocation,
    decisions: Mapping[str, PhaseLike],
    switchable: Collection[str],
) -> PhaseAllocation:
    """Apply per-house phase decisions to switchable houses only.

    Raises:
        AllocationError: A decision targets a non-switchable or unknown house.
    """
    rejected = sorted(hid for hid in decisions if hid not in switchable)
    if rejected:
        raise AllocationError("phase decision on non-switchable household", rejected)
    unknown = sorted(hid for hid in decisions if hid not in current)
    if unknown:
        raise AllocationError("phase decision on unknown household", unknown)
    if not decisions:
        return current
    matrix = current.matrix.copy()
    for hid, phase in decisions.items():
        j = current.household_ids.index(hid)
        matrix[:, j] = False
        matrix[as_phase(phase), j] = True
    return PhaseAllocation(current.household_ids, matrix)


@dataclass(frozen=True)
class SlotFlows:
    """Signed household powers for one 10-minute slot.

    Positive power is net consumption from the grid, negative is injection.

    Attributes:
        slot_index: Slot number from the start of the horizon.
        per_house_power: Household id -> kW.
    """

    slot_index: int
    per_house_power: Mapping[str, float]

    def __getitem__(self, household_id: str) -> float:
        return self.per_house_power[household_id]

    def __contains__(self, household_id: object) -> bool:
        return household_id in self.per_house_power

    def require(self, household_ids: Iterable[str]) -> None:
        missing = [hid for hid in household_ids if hid not in self.per_house_power]
        if missing:
            raise FlowError(f"slot {self.slot_index} has no flow entry", missing)

    @property
    def total(self) -> float:
        return float(sum(self.per_house_power.values()))


def aggregate_phase_flows(
    alloc: PhaseAllocation,
    flows: SlotFlows,
    subset: Optional[Union[Collection[str], Callable[[str], bool]]] = None,
) -> np.ndarray:
    """Sum household powers per phase.

    Args:
        alloc: A valid allocation.
        flows: Slot flows covering every household in ``subset``.
        subset: Household ids, or a predicate on ids; None means every
            household in the allocation.

    Returns:
        Length-3 array of kW for phases a, b, c.

    Raises:
        AllocationError: ``subset`` names households outside the allocation.
    """
    if subset is None:
        members = list(alloc.household_ids)
    elif callable(subset):
        members = [hid for hid in alloc.household_ids if subset(hid)]
    else:
        unknown = [hid for hid in subset if hid not in alloc]
        if unknown:
            raise AllocationError("households not in the allocation", unknown)
        members = [hid for hid in alloc.household_ids if hid in subset]
    flows.require(members)
    totals = np.zeros(3)
    for hid in members:
        totals[alloc.phase_of(hid)] += flows[hid]
    return totals
