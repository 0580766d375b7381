"""Scenario pipeline: profiles, batteries, switch placement, allocation, load flow, metrics."""

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from phaseswitch.allocator import AllocationSolver, build_problem, phases_objective
from phaseswitch.config import SLOTS_PER_DAY, AllocationStrategy, Config, SelectionStrategy
from phaseswitch.exceptions import ConfigError, ProfileError, VufUndefinedError
from phaseswitch.grid import (
    FeederModel,
    PhaseAllocation,
    SlotFlows,
    aggregate_phase_flows,
    apply_phase_decisions,
    load_network,
)
from phaseswitch.harness.metrics import MetricsReport, SlotRecord, SurfaceRow, aggregate
from phaseswitch.loadflow import (
    LoadflowResult,
    diagnostic_rows,
    feeder_losses_kw,
    feeder_vuf_profile,
    losses_report,
    solve_feeder,
    voltage_extremes,
)
from phaseswitch.market import (
    HouseholdSchedules,
    ProfileSet,
    commitments_for_slot,
    generate_profiles,
    schedule_households,
)
from phaseswitch.scenario import ScenarioConfig
from phaseswitch.selection import (
    SelectionContext,
    average_phase_voltages,
    plan_mean_based,
    select,
)

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


class ScenarioRunner:
    """Runs one :class:`ScenarioConfig` end to end.

    Allocation decisions are taken slot by slot in order (each slot starts
    from the previous slot's allocation); load flows of decided slots are
    independent and may run on a thread pool.
    """

    def __init__(
        self,
        scenario: ScenarioConfig,
        config: Optional[Config] = None,
        profiles: Optional[ProfileSet] = None,
        base_dir: Optional[PathLike] = None,
    ) -> None:
        self.scenario = scenario
        self.config = config or Config.default()
        self.base_dir = base_dir
        self._profiles = profiles

    @property
    def slots(self) -> int:
        return self.scenario.days * SLOTS_PER_DAY

    def load_model(self) -> FeederModel:
        model = load_network(self.scenario.network_path(self.base_dir))
        if len(model.households) != self.scenario.household_count:
            raise ConfigError(
                f"network has {len(model.households)} households, scenario expects "
                f"{self.scenario.household_count}",
                "household_count",
            )
        placement = self.scenario.resolve_placement(model.household_ids)
        return model.with_der(placement.pv, placement.battery)

    def profiles(self, model: FeederModel) -> ProfileSet:
        if self._profiles is None:
            return generate_profiles(
                model.household_ids, self.scenario.days, self.scenario.seed, self.scenario.profiles
            )
        missing = [hid for hid in model.household_ids if hid not in self._profiles.loads]
        if missing:
            raise ProfileError(f"no load profile for {len(missing)} household(s): {', '.join(missing)}")
        if self._profiles.slots < self.slots:
            raise ProfileError(f"profiles cover {self._profiles.slots} slots, horizon needs {self.slots}")
        return self._profiles.truncated(self.slots)

    def run(self) -> MetricsReport:
        scenario = self.scenario
        model = self.load_model()
        schedules = schedule_households(
            model.households,
            self.profiles(model),
            scenario.battery,
            scenario.tariff,
            scenario.market_mode,
        )
        initial = model.initial_allocation()
        strategy = scenario.allocation
        if scenario.budget == 0 or not model.market_participants():
            strategy = AllocationStrategy.NONE

        baseline: Optional[List[LoadflowResult]] = None
        if strategy == AllocationStrategy.NONE:
            baseline = self._solve_all(model, [initial] * self.slots, schedules)
            allocations = [initial] * self.slots
            selected: Sequence[str] = ()
            per_slot_switches = [0] * self.slots
            objectives = self._fixed_objectives(model, schedules, allocations, initial)
            operations = 0
        else:
            ctx = self._selection_context(model, schedules, initial)
            if strategy == AllocationStrategy.STATIC:
                moves = plan_mean_based(ctx)
                selected = [m.household_id for m in moves]
                moved = apply_phase_decisions(
                    initial, {m.household_id: m.to_phase for m in moves}, selected
                )
                allocations = [moved] * self.slots
                per_slot_switches = [0] * self.slots
                objectives = self._fixed_objectives(model, schedules, allocations, initial)
                operations = len(moves)
                logger.info("static reallocation of %d households: %s", len(moves), selected)
            else:
                selected = select(ctx, scenario.selection)
                model = model.with_switches(selected)
                allocations, per_slot_switches, objectives = self._allocate(model, schedules, initial)
                operations = sum(per_slot_switches)

        results = baseline or self._solve_all(model, allocations, schedules)
        records, surface = self._records(model, results, per_slot_switches, objectives, schedules)
        header = dict(
            scenario=scenario.name,
            strategy=scenario.allocation.value,
            selection=scenario.selection.value,
            budget=scenario.budget,
            market_mode=scenario.market_mode.value,
            seed=scenario.seed,
            days=scenario.days,
        )
        report = aggregate(
            header,
            records,
            losses_report(results),
            operations,
            selected,
            surface,
            feeders=model.feeders,
            slots=self.slots,
        )
        logger.info(
            "%s/%s finished: peak VUF %.3f%%, %d switch operations",
            scenario.name,
            scenario.allocation.value,
            report.peak_vuf_pct,
            report.switch_operations,
        )
        return report

    def _selection_context(
        self, model: FeederModel, schedules: HouseholdSchedules, initial: PhaseAllocation
    ) -> SelectionContext:
        voltages: Dict[str, Tuple[float, float, float]] = {}
        needs_voltages = (
            self.scenario.allocation == AllocationStrategy.DYNAMIC
            and self.scenario.selection != SelectionStrategy.MB
        )
        if needs_voltages:
            baseline = self._solve_all(model, [initial] * self.slots, schedules)
            voltages = average_phase_voltages(model, baseline, self.config.voltage_reference)
        return SelectionContext(
            long_run_avg_power=schedules.averages(),
            per_phase_avg_voltage=voltages,
            allocation=initial,
            households=model.households,
            budget=self.scenario.budget,
        )

    def _background(
        self, model: FeederModel, schedules: HouseholdSchedules, initial: PhaseAllocation
    ) -> Dict[str, np.ndarray]:
        averages = SlotFlows(-1, schedules.averages())
        background = {}
        for feeder in model.feeders:
            others = [h.id for h in model.households_on(feeder) if not h.market_participant]
            background[feeder] = aggregate_phase_flows(initial, averages, others)
        return background

    @staticmethod
    def _participants(model: FeederModel) -> Dict[str, List[str]]:
        return {feeder: [h.id for h in model.market_participants(feeder)] for feeder in model.feeders}

    def _fixed_objectives(
        self,
        model: FeederModel,
        schedules: HouseholdSchedules,
        allocations: Sequence[PhaseAllocation],
        initial: PhaseAllocation,
    ) -> Dict[Tuple[int, str], Tuple[float, float]]:
        """Allocator objective of allocations that are never re-optimized.

        Both entries of each pair hold the same value, so none and static runs
        report on the scale dynamic runs optimize.
        """
        background = (
            self._background(model, schedules, initial) if self.config.include_background else {}
        )
        objectives: Dict[Tuple[int, str], Tuple[float, float]] = {}
        for feeder, ids in self._participants(model).items():
            if not ids:
                continue
            for slot, alloc in enumerate(allocations):
                commitments = commitments_for_slot(schedules, slot, ids, feeder)
                problem = build_problem(commitments, alloc, (), background=background.get(feeder))
                value = phases_objective(problem, problem.current_phases)
                objectives[(slot, feeder)] = (value, value)
        return objectives

    def _allocate(
        self, model: FeederModel, schedules: HouseholdSchedules, initial: PhaseAllocation
    ) -> Tuple[List[PhaseAllocation], List[int], Dict[Tuple[int, str], Tuple[float, float]]]:
        solver = AllocationSolver(self.config)
        switchable = set(model.switchable_ids())
        background = (
            self._background(model, schedules, initial) if self.config.include_background else {}
        )
        participants = self._participants(model)
        current = initial
        allocations: List[PhaseAllocation] = []
        switches: List[int] = []
        objectives: Dict[Tuple[int, str], Tuple[float, float]] = {}
        for slot in range(self.slots):
            moved = 0
            for feeder in model.feeders:
                ids = participants[feeder]
                if not ids:
                    continue
                commitments = commitments_for_slot(schedules, slot, ids, feeder)
                problem = build_problem(
                    commitments,
                    current,
                    switchable,
                    background=background.get(feeder),
                    max_switches=self.config.max_switches_per_slot,
                )
                solution = solver.solve(problem)
                keep = phases_objective(problem, problem.current_phases)
                objectives[(slot, feeder)] = (solution.objective, keep)
                decisions = solution.changed(problem)
                if decisions:
                    current = apply_phase_decisions(current, decisions, switchable)
                    moved += len(decisions)
            allocations.append(current)
            switches.append(moved)
        logger.info("dynamic allocation: %d switch operations over %d slots", sum(switches), self.slots)
        return allocations, switches, objectives

    def _solve_all(
        self,
        model: FeederModel,
        allocations: Sequence[PhaseAllocation],
        schedules: HouseholdSchedules,
    ) -> List[LoadflowResult]:
        def solve(slot: int) -> LoadflowResult:
            return solve_feeder(model, allocations[slot], schedules.slot_flows(slot), self.config)

        if self.config.workers > 1:
            with ThreadPoolExecutor(max_workers=self.config.workers) as pool:
                results = list(pool.map(solve, range(self.slots)))
        else:
            results = [solve(slot) for slot in range(self.slots)]
        for result in results:
            if not result.converged:
                logger.warning(
                    "slot %d: load flow %s after %d iterations",
                    result.slot_index,
                    result.status.value,
                    result.iterations,
                )
        return results

    def _surface_feeder(self, model: FeederModel, schedules: HouseholdSchedules) -> Optional[str]:
        """Feeder with the largest horizon-average absolute household power."""
        averages = schedules.averages()
        best = None
        for feeder in model.feeders:
            load = sum(abs(averages[h.id]) for h in model.households_on(feeder))
            if best is None or load > best[0]:
                best = (load, feeder)
        return None if best is None else best[1]

    def _records(
        self,
        model: FeederModel,
        results: Sequence[LoadflowResult],
        switches: Sequence[int],
        objectives: Dict[Tuple[int, str], Tuple[float, float]],
        schedules: HouseholdSchedules,
    ) -> Tuple[List[SlotRecord], List[SurfaceRow]]:
        nan = float("nan")
        surface_feeder = self._surface_feeder(model, schedules)
        records: List[SlotRecord] = []
        surface: List[SurfaceRow] = []
        for slot, result in enumerate(results):
            if self.config.verbose:
                for row in diagnostic_rows(result, slot):
                    logger.debug("slot %d bus %s phase %s |V|=%.3f V angle=%.3f deg VUF=%.4f%%", *row)
            for feeder in model.feeders:
                objective, keep = objectives.get((slot, feeder), (None, None))
                losses = feeder_losses_kw(result, feeder)
                try:
                    profile = feeder_vuf_profile(result, feeder) if result.converged else None
                except VufUndefinedError:
                    profile = None
                if profile is None:
                    records.append(
                        SlotRecord(slot, feeder, nan, nan, nan, nan, losses, switches[slot], objective, keep, False)
                    )
                    continue
                low, high = voltage_extremes(result, feeder)
                records.append(
                    SlotRecord(
                        slot,
                        feeder,
                        profile.max,
                        profile.mean,
                        low,
                        high,
                        losses,
                        switches[slot],
                        objective,
                        keep,
                        True,
                    )
                )
                if feeder == surface_feeder:
                    surface.extend(
                        SurfaceRow(slot, feeder, bus, model.depth(bus), vuf)
                        for bus, vuf in zip(profile.bus_ids, profile.values)
                    )
        return records, surface


def run_scenario(
    scenario: ScenarioConfig,
    config: Optional[Config] = None,
    profiles: Optional[ProfileSet] = None,
    base_dir: Optional[PathLike] = None,
) -> MetricsReport:
    """Simulate one scenario and aggregate its metrics.

    Args:
        scenario: What to simulate.
        config: Engine parameters.
        profiles: Load profiles to use instead of the synthetic ones.
        base_dir: Directory relative network paths are resolved against.

    Returns:
        MetricsReport; slots whose load flow failed are listed in
        ``unconverged_slots`` and excluded from the aggregates.
    """
    return ScenarioRunner(scenario, config, profiles, base_dir).run()
