"""
Exception hierarchy shared by the planning toolkit.
"""
from typing import Any, Optional


class SectorPlanError(Exception):
    """Base class for every failure raised by the toolkit."""


class ZeroVectorError(SectorPlanError, ValueError):
    """A direction was requested between two coincident points."""


class GenerationFailedError(SectorPlanError):
    """Scenario generation could not place an obstacle."""


class ScenarioParseError(SectorPlanError):
    """A scenario file is not well-formed or does not match the schema."""

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        self.line = line
        self.field = field
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field:
            location.append(f"field '{field}'")
        super().__init__(f"{message} ({', '.join(location)})" if location else message)


class ScenarioValidationError(SectorPlanError):
    """A scenario parsed correctly but violates a scenario invariant."""


class GlobalPlanningError(SectorPlanError):
    """Base class for failures of the grid search stage."""


class SourceBlockedError(GlobalPlanningError):
    """The grid cell holding the source is blocked after inflation."""


class DestinationBlockedError(GlobalPlanningError):
    """The grid cell holding the destination is blocked after inflation."""


class NoGlobalPathError(GlobalPlanningError):
    """The destination cell is unreachable from the source cell."""


class SamplingExhaustedError(SectorPlanError):
    """Rejection sampling hit its consecutive-rejection limit."""


class NoPathFoundError(SectorPlanError):
    """No vertex entered the goal region; the failed result is attached."""

    def __init__(self, message: str, result: Any = None):
        super().__init__(message)
        self.result = result


class DigestMismatchError(SectorPlanError):
    """A plan result was paired with a scenario it was not computed on."""
