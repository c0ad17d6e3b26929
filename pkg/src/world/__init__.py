"""
Scenario model, generation and persistence.
"""

from .scenario import (
    ScenarioKind,
    KIND_OBSTACLE_COUNTS,
    Scenario,
    Path,
    is_free,
    path_length,
)
from .generation import GenerationParams, generate_scenario
from .persistence import (
    ScenarioDocument,
    dump_scenario,
    scenario_digest,
    save_scenario,
    parse_scenario,
    load_scenario,
)

__all__ = [
    'ScenarioKind',
    'KIND_OBSTACLE_COUNTS',
    'Scenario',
    'Path',
    'is_free',
    'path_length',
    'GenerationParams',
    'generate_scenario',
    'ScenarioDocument',
    'dump_scenario',
    'scenario_digest',
    'save_scenario',
    'parse_scenario',
    'load_scenario',
]
