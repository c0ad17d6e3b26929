"""
Plan results shared by both planners.
"""
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from ..geometry import Point2, Sector
from ..utils.rng import RNG_ALGORITHM
from ..world import Path
from .global_planner import GlobalPath
from .tree import Tree


class PlannerKind(str, Enum):
    RRT_STAR = "rrt_star"
    AD_RRT_STAR = "ad_rrt_star"


class PlanMetrics(BaseModel):
    """Per-run counters; elapsed_seconds is the only wall-clock value."""
    model_config = ConfigDict(frozen=True)

    node_count: int
    iterations: int
    total_path_cost: Optional[float] = None
    average_path_cost: Optional[float] = None
    rejected_samples: int = 0
    rewires: int = 0
    widenings: int = 0
    advancements: int = 0
    first_solution_iteration: Optional[int] = None
    elapsed_seconds: float = 0.0


class RegionEvent(BaseModel):
    """A connectivity-region rebuild: initial, widen, exhausted or advance."""
    model_config = ConfigDict(frozen=True)

    iteration: int
    reason: str
    anchor_waypoint_index: int
    half_angle: float


class SampleAudit(BaseModel):
    """A sample accepted into an extension attempt and the sector it was drawn from."""
    model_config = ConfigDict(frozen=True)

    iteration: int
    sector: Sector
    sample: Point2


class PlanResult(BaseModel):
    """Final path, metrics record and full tree of one planner run."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    planner: PlannerKind
    scenario_digest: str
    seed: int
    rng_algorithm: str = RNG_ALGORITHM
    success: bool
    path: Optional[Path] = None
    raw_path: Optional[Path] = None
    metrics: PlanMetrics
    cost_trace: Tuple[Tuple[int, float], ...] = ()
    tree: Tree
    config: Dict[str, Any] = Field(default_factory=dict)
    config_digest: str = ""
    global_path: Optional[GlobalPath] = None
    final_sector: Optional[Sector] = None
    region_events: Tuple[RegionEvent, ...] = ()
    audit: Tuple[SampleAudit, ...] = ()
