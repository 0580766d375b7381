"""Per-slot mixed-integer least-squares phase allocation problem.

For ``M`` market participants with commitments ``p_c`` the allocation vector is
``x = [x^a, x^b, x^c]`` of length ``3M`` where ``x[i*M + j] = 1`` puts house
``j`` on phase ``i``. ``P`` is the ``3M x 3`` block-diagonal matrix with
``P[i*M + j, i] = p_c[j]`` so that ``P^T x`` is the per-phase participant flow.

The least-squares objective ``||e_bar - P^T x||^2`` expands to
``x^T Q x + f^T x + e_bar . e_bar`` with ``Q = P P^T`` and ``f = -2 P e_bar``.
"""

import math
from dataclasses import dataclass
from typing import Collection, Dict, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np

from phaseswitch.exceptions import AllocationError, InfeasibleAllocationError
from phaseswitch.grid.allocation import PhaseAllocation
from phaseswitch.grid.household import Phase

# Objective comparisons are exact on a grid of this relative resolution, so
# that every solver orders candidate allocations identically.
OBJECTIVE_RESOLUTION = 1e-10

DEFAULT_PHASE_ORDER = (0, 1, 2)


@dataclass(frozen=True)
class CommitmentSet:
    """Signed market commitments (kW) of the participants of one feeder and slot.

    Attributes:
        slot_index: Slot the commitments apply to.
        entries: (household id, committed kW) pairs, one per participant.
        feeder_id: Feeder of the participants.
    """

    slot_index: int
    entries: Tuple[Tuple[str, float], ...]
    feeder_id: Optional[str] = None

    def __post_init__(self) -> None:
        ids = [hid for hid, _ in self.entries]
        if len(set(ids)) != len(ids):
            raise AllocationError("duplicate commitment entries", sorted({h for h in ids if ids.count(h) > 1}))

    @classmethod
    def from_mapping(
        cls, slot_index: int, powers: Mapping[str, float], feeder_id: Optional[str] = None
    ) -> "CommitmentSet":
        return cls(slot_index, tuple((hid, float(p)) for hid, p in powers.items()), feeder_id)

    @property
    def household_ids(self) -> Tuple[str, ...]:
        return tuple(hid for hid, _ in self.entries)

    @property
    def powers(self) -> np.ndarray:
        return np.array([p for _, p in self.entries], dtype=float)

    @property
    def total(self) -> float:
        """Aggregate commitment ``e`` of the feeder."""
        return math.fsum(p for _, p in self.entries)

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True, eq=False)
class AllocationProblem:
    """Matrices and constraints of one allocation problem.

    Attributes:
        household_ids: Participants, in commitment order.
        commitments: ``p_c`` in kW.
        P: ``3M x 3`` block-diagonal commitment matrix.
        e_bar: Per-phase target flows (all equal to ``e/3`` unless a
            background load is included).
        Q: ``P P^T``.
        f: ``-2 P e_bar``.
        x0: Current allocation of fixed houses, zeros on switchable positions.
        switchable_mask: True for participants equipped with a switch.
        current_phases: Phase index of every participant before solving.
        max_switches: Optional cap on switches from the current allocation.
        slot_index: Slot of the commitments.
    """

    household_ids: Tuple[str, ...]
    commitments: np.ndarray
    P: np.ndarray
    e_bar: np.ndarray
    Q: np.ndarray
    f: np.ndarray
    x0: np.ndarray
    switchable_mask: np.ndarray
    current_phases: Tuple[int, ...]
    max_switches: Optional[int] = None
    slot_index: int = 0

    @property
    def size(self) -> int:
        """Number of participants ``M``."""
        return len(self.household_ids)

    @property
    def switchable_count(self) -> int:
        """Number of switch-equipped participants ``E``."""
        return int(self.switchable_mask.sum())

    @property
    def e_m(self) -> float:
        return float(self.e_bar.mean())

    @property
    def constant(self) -> float:
        """``e_bar . e_bar``, the term dropped from the quadratic form."""
        return float(self.e_bar @ self.e_bar)

    @property
    def scale(self) -> float:
        """Magnitude used to make objective comparisons relative."""
        return max(float(self.commitments @ self.commitments) + self.constant, 1e-12)

    def switchable_positions(self) -> Tuple[int, ...]:
        return tuple(int(j) for j in np.flatnonzero(self.switchable_mask))

    def vector(self, phases: Sequence[int]) -> np.ndarray:
        """Allocation vector ``x`` for per-participant phase indices."""
        m = self.size
        if len(phases) != m:
            raise InfeasibleAllocationError(f"expected {m} phases, got {len(phases)}")
        x = np.zeros(3 * m, dtype=bool)
        for j, phase in enumerate(phases):
            x[int(phase) * m + j] = True
        return x

    def phases_of(self, x: np.ndarray) -> Tuple[int, ...]:
        """Per-participant phase indices of a feasible ``x``."""
        self.check_feasible(x)
        blocks = np.asarray(x, dtype=int).reshape(3, self.size)
        return tuple(int(i) for i in blocks.argmax(axis=0))

    def check_feasible(self, x: np.ndarray) -> None:
        """Raise unless ``x`` is boolean, one phase per house and pins fixed houses."""
        x = np.asarray(x)
        m = self.size
        if x.shape != (3 * m,):
            raise InfeasibleAllocationError(f"allocation vector must have length {3 * m}")
        if not np.all((x == 0) | (x == 1)):
            raise InfeasibleAllocationError("allocation vector must be boolean")
        blocks = x.astype(int).reshape(3, m)
        bad = [self.household_ids[j] for j in np.flatnonzero(blocks.sum(axis=0) != 1)]
        if bad:
            raise InfeasibleAllocationError("each house needs exactly one phase", bad)
        fixed = ~self.switchable_mask
        moved = [
            self.household_ids[j]
            for j in np.flatnonzero(fixed)
            if blocks[self.current_phases[j], j] != 1
        ]
        if moved:
            raise InfeasibleAllocationError("fixed houses must keep their phase", moved)

    def quadratic_value(self, x: np.ndarray) -> float:
        """``x^T Q x + f^T x + e_bar . e_bar`` (the expanded objective)."""
        xf = np.asarray(x, dtype=float)
        return float(xf @ self.Q @ xf + self.f @ xf + self.constant)


def build_problem(
    commitments: CommitmentSet,
    current: PhaseAllocation,
    switchable: Collection[str],
    background: Optional[Sequence[float]] = None,
    max_switches: Optional[int] = None,
) -> AllocationProblem:
    """Assemble ``P``, ``e_bar``, ``Q``, ``f`` and ``x0`` for one feeder and slot.

    Args:
        commitments: Participant commitments of the feeder.
        current: Allocation in force before the slot.
        switchable: Ids of switch-equipped households.
        background: Optional per-phase kW of non-participants; the target then
            balances the total flow ``P^T x + background``.
        max_switches: Optional cap on switch operations.

    Raises:
        AllocationError: Empty commitments or participants missing from ``current``.
    """
    if not len(commitments):
        raise AllocationError("no commitments to allocate")
    ids = commitments.household_ids
    missing = [hid for hid in ids if hid not in current]
    if missing:
        raise AllocationError("committed households absent from allocation", missing)
    if max_switches is not None and max_switches < 0:
        raise AllocationError("max_switches must be non-negative")

    m = len(ids)
    p = commitments.powers
    phases = tuple(int(current.phase_of(hid)) for hid in ids)
    mask = np.array([hid in switchable for hid in ids], dtype=bool)

    P = np.zeros((3 * m, 3))
    for i in range(3):
        P[i * m : (i + 1) * m, i] = p

    total = commitments.total
    if background is None:
        e_bar = np.full(3, total / 3.0)
    else:
        bg = np.asarray(background, dtype=float)
        if bg.shape != (3,):
            raise AllocationError("background must hold one value per phase")
        e_bar = np.full(3, (total + math.fsum(bg)) / 3.0) - bg

    x0 = np.zeros(3 * m, dtype=bool)
    for j in np.flatnonzero(~mask):
        x0[phases[j] * m + j] = True

    arrays = [p, P, e_bar, x0, mask]
    Q = P @ P.T
    f = -2.0 * (P @ e_bar)
    for arr in arrays + [Q, f]:
        arr.setflags(write=False)

    return AllocationProblem(
        household_ids=ids,
        commitments=p,
        P=P,
        e_bar=e_bar,
        Q=Q,
        f=f,
        x0=x0,
        switchable_mask=mask,
        current_phases=phases,
        max_switches=max_switches,
        slot_index=commitments.slot_index,
    )


def fixed_phase_sums(problem: AllocationProblem) -> Tuple[float, float, float]:
    """Per-phase flow of fixed houses, summed in commitment order."""
    sums = [0.0, 0.0, 0.0]
    for j in range(problem.size):
        if not problem.switchable_mask[j]:
            sums[problem.current_phases[j]] += float(problem.commitments[j])
    return sums[0], sums[1], sums[2]


def deviation(target: np.ndarray, sums: Sequence[float]) -> float:
    """``sum_i (target_i - sums_i)^2`` evaluated in phase order."""
    d0 = float(target[0]) - sums[0]
    d1 = float(target[1]) - sums[1]
    d2 = float(target[2]) - sums[2]
    return (d0 * d0 + d1 * d1) + d2 * d2


def phases_objective(problem: AllocationProblem, phases: Sequence[int]) -> float:
    """Objective of a per-participant phase assignment (fixed houses assumed pinned)."""
    sums = list(fixed_phase_sums(problem))
    for j in problem.switchable_positions():
        sums[phases[j]] += float(problem.commitments[j])
    return deviation(problem.e_bar, sums)


def objective_value(problem: AllocationProblem, x: np.ndarray) -> float:
    """Least-squares value ``||e_bar - P^T x||^2`` of a feasible allocation.

    Raises:
        InfeasibleAllocationError: ``x`` violates the allocation constraints.
    """
    problem.check_feasible(x)
    return phases_objective(problem, problem.phases_of(x))


def objective_key(problem: AllocationProblem, value: float) -> int:
    """Objective quantized on the comparison grid."""
    return int(math.floor(value / (problem.scale * OBJECTIVE_RESOLUTION) + 0.5))


def count_switches(problem: AllocationProblem, phases: Sequence[int]) -> int:
    return sum(1 for j, phase in enumerate(phases) if phase != problem.current_phases[j])


@dataclass(frozen=True)
class AllocationSolution:
    """Optimal phase assignment of the participants of one problem.

    Attributes:
        household_ids: Participants in commitment order.
        phases: Phase index per participant.
        objective: ``||e_bar - P^T x||^2``.
        switches_from_current: Participants whose phase changes.
        optimal: The search was exhaustive or provably complete.
        solver: Name of the solver that produced the solution.
        evaluated: Leaves (exhaustive) or nodes (branch and bound) visited.
    """

    household_ids: Tuple[str, ...]
    phases: Tuple[int, ...]
    objective: float
    switches_from_current: int
    optimal: bool = True
    solver: str = ""
    evaluated: int = 0

    def phase_of(self, household_id: str) -> Phase:
        return Phase(self.phases[self.household_ids.index(household_id)])

    def vector(self) -> np.ndarray:
        m = len(self.phases)
        x = np.zeros(3 * m, dtype=bool)
        for j, phase in enumerate(self.phases):
            x[phase * m + j] = True
        return x

    def decisions(self, problem: AllocationProblem) -> Dict[str, Phase]:
        """Phase decisions for the switchable participants."""
        return {
            self.household_ids[j]: Phase(self.phases[j])
            for j in problem.switchable_positions()
        }

    def changed(self, problem: AllocationProblem) -> Dict[str, Phase]:
        """Decisions that actually move a house."""
        return {
            hid: phase
            for hid, phase in self.decisions(problem).items()
            if int(phase) != problem.current_phases[self.household_ids.index(hid)]
        }


def tie_break_ranks(phase_order: Iterable[int]) -> Tuple[int, int, int]:
    """Rank of each phase index in a tie-break order such as (0, 1, 2)."""
    order = tuple(int(p) for p in phase_order)
    if sorted(order) != [0, 1, 2]:
        raise AllocationError(f"invalid phase order {order}")
    ranks = [0, 0, 0]
    for rank, phase in enumerate(order):
        ranks[phase] = rank
    return ranks[0], ranks[1], ranks[2]
