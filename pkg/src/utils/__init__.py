"""
Utility functions and helpers.
"""

from .config import Config, load_config
from .errors import (
    SectorPlanError,
    ZeroVectorError,
    GenerationFailedError,
    ScenarioParseError,
    ScenarioValidationError,
    GlobalPlanningError,
    SourceBlockedError,
    DestinationBlockedError,
    NoGlobalPathError,
    SamplingExhaustedError,
    NoPathFoundError,
    DigestMismatchError,
)
from .rng import RNG_ALGORITHM, make_rng

__all__ = [
    'Config',
    'load_config',
    'SectorPlanError',
    'ZeroVectorError',
    'GenerationFailedError',
    'ScenarioParseError',
    'ScenarioValidationError',
    'GlobalPlanningError',
    'SourceBlockedError',
    'DestinationBlockedError',
    'NoGlobalPathError',
    'SamplingExhaustedError',
    'NoPathFoundError',
    'DigestMismatchError',
    'RNG_ALGORITHM',
    'make_rng',
]
