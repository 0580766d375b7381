"""Custom exceptions for phaseswitch."""

from typing import Iterable, Optional, Tuple


class PhaseSwitchError(Exception):
    """Base exception for all phaseswitch errors."""

    pass


class NetworkError(PhaseSwitchError):
    """Raised when a network file or feeder model is invalid."""

    def __init__(self, message: str, path: Optional[str] = None) -> None:
        self.path = path
        super().__init__(message)

    def __str__(self) -> str:
        if self.path:
            return f"{self.path}: {super().__str__()}"
        return super().__str__()


class AllocationError(PhaseSwitchError):
    """Raised when a phase allocation or a phase decision is invalid."""

    def __init__(self, message: str, household_ids: Iterable[str] = ()) -> None:
        self.household_ids: Tuple[str, ...] = tuple(household_ids)
        super().__init__(message)

    def __str__(self) -> str:
        if self.household_ids:
            return f"{super().__str__()} (households: {', '.join(self.household_ids)})"
        return super().__str__()


class InfeasibleAllocationError(AllocationError):
    """Raised when an allocation vector violates the allocation constraints."""

    pass


class SolverCapExceeded(AllocationError):
    """Raised when the exhaustive solver is asked to enumerate too many houses."""

    def __init__(self, switchable: int, cap: int) -> None:
        self.switchable = switchable
        self.cap = cap
        super().__init__(
            f"{switchable} switchable houses exceed the exhaustive cap of {cap}"
        )


class FlowError(PhaseSwitchError):
    """Raised when slot flows do not cover the required households."""

    def __init__(self, message: str, household_ids: Iterable[str] = ()) -> None:
        self.household_ids: Tuple[str, ...] = tuple(household_ids)
        super().__init__(message)

    def __str__(self) -> str:
        if self.household_ids:
            return f"{super().__str__()} (households: {', '.join(self.household_ids)})"
        return super().__str__()


class VufUndefinedError(PhaseSwitchError):
    """Raised when the positive-sequence voltage of a phasor set is zero."""

    pass


class ConfigError(PhaseSwitchError):
    """Raised when a configuration or scenario value is invalid."""

    def __init__(self, message: str, field: Optional[str] = None) -> None:
        self.field = field
        super().__init__(message)

    def __str__(self) -> str:
        if self.field:
            return f"{self.field}: {super().__str__()}"
        return super().__str__()


class HorizonMismatchError(ConfigError):
    """Raised when compared runs do not share the same horizon."""

    pass


class ProfileError(PhaseSwitchError):
    """Raised when profile data is malformed."""

    pass


class ReportError(PhaseSwitchError):
    """Raised when a report cannot be written."""

    def __init__(self, message: str, path: str) -> None:
        self.path = path
        super().__init__(message)

    def __str__(self) -> str:
        return f"{super().__str__()} [{self.path}]"


class LoadflowError(PhaseSwitchError):
    """Raised when a metric is requested from an unconverged load flow."""

    pass
