"""JSON regression corpus of allocation problems.

A corpus file holds one instance::

    {
      "slot": 12,
      "commitments": [["h01", 1.2], ["h02", -0.8]],
      "current": ["a", "c"],
      "switchable": [true, false],
      "max_switches": null,
      "background": null,
      "expected_objective": 0.3364
    }
"""

import json
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple, Union

from phaseswitch.allocator.problem import AllocationProblem, CommitmentSet, build_problem
from phaseswitch.exceptions import ConfigError, ReportError
from phaseswitch.grid.allocation import PhaseAllocation
from phaseswitch.grid.household import Phase

PathLike = Union[str, Path]


def instance_to_dict(
    problem: AllocationProblem,
    expected_objective: Optional[float] = None,
    background: Optional[Sequence[float]] = None,
) -> Dict[str, Any]:
    return {
        "slot": problem.slot_index,
        "commitments": [
            [hid, float(p)] for hid, p in zip(problem.household_ids, problem.commitments)
        ],
        "current": [Phase(i).label for i in problem.current_phases],
        "switchable": [bool(s) for s in problem.switchable_mask],
        "max_switches": problem.max_switches,
        "background": None if background is None else [float(b) for b in background],
        "expected_objective": expected_objective,
    }


def instance_from_dict(data: Dict[str, Any]) -> Tuple[AllocationProblem, Optional[float]]:
    """Rebuild a problem and its expected objective from :func:`instance_to_dict` output."""
    try:
        entries = tuple((str(hid), float(p)) for hid, p in data["commitments"])
        current = data["current"]
        switchable = data["switchable"]
    except (KeyError, TypeError, ValueError) as e:
        raise ConfigError(f"malformed allocation instance: {e}") from e
    if not (len(entries) == len(current) == len(switchable)):
        raise ConfigError("commitments, current and switchable must have equal length")
    commitments = CommitmentSet(int(data.get("slot", 0)), entries)
    try:
        allocation = PhaseAllocation.from_phases(
            {hid: phase for (hid, _), phase in zip(entries, current)}
        )
    except ValueError as e:
        raise ConfigError(str(e), "current") from e
    flagged = {hid for (hid, _), s in zip(entries, switchable) if s}
    problem = build_problem(
        commitments,
        allocation,
        flagged,
        background=data.get("background"),
        max_switches=data.get("max_switches"),
    )
    expected = data.get("expected_objective")
    return problem, None if expected is None else float(expected)


def dump_instance(
    problem: AllocationProblem,
    path: PathLike,
    expected_objective: Optional[float] = None,
    background: Optional[Sequence[float]] = None,
) -> None:
    """Write one problem instance to ``path``."""
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(instance_to_dict(problem, expected_objective, background), fh, indent=2)
            fh.write("\n")
    except OSError as e:
        raise ReportError(f"cannot write allocation instance: {e.strerror}", str(path)) from e


def load_instance(path: PathLike) -> Tuple[AllocationProblem, Optional[float]]:
    """Read one problem instance written by :func:`dump_instance`."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read allocation instance {path}: {e.strerror}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON in {path}: {e}") from e
    return instance_from_dict(data)
