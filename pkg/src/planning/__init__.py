"""
Global routing, the RRT* substrate and both planners.
"""

from .global_planner import (
    GridMap,
    GlobalPath,
    rasterize,
    astar,
    dijkstra_oracle,
    plan_global_path,
    straight_line_path,
)
from .tree import NO_PARENT, Tree, check_tree_invariants
from .result import PlannerKind, PlanMetrics, RegionEvent, SampleAudit, PlanResult
from .planner_core import (
    SteerParams,
    NearParams,
    RRTStarConfig,
    SamplingStats,
    config_digest,
    initialize_tree,
    nearest,
    near_radius,
    near,
    steer,
    edge_is_free,
    choose_parent,
    insert_node,
    rewire,
    extend_tree,
    sample_uniform_free,
    extract_path,
    plan_rrt_star,
)
from .ad_rrt_star import (
    AngleSchedule,
    AdvanceRule,
    ADRRTStarConfig,
    RegionParams,
    ConnectivityRegion,
    expansion_scale,
    build_region,
    bounded_sample,
    should_widen,
    widen,
    advance_anchor,
    prune_path,
    plan_ad_rrt_star,
)

__all__ = [
    'GridMap',
    'GlobalPath',
    'rasterize',
    'astar',
    'dijkstra_oracle',
    'plan_global_path',
    'straight_line_path',
    'NO_PARENT',
    'Tree',
    'check_tree_invariants',
    'PlannerKind',
    'PlanMetrics',
    'RegionEvent',
    'SampleAudit',
    'PlanResult',
    'SteerParams',
    'NearParams',
    'RRTStarConfig',
    'SamplingStats',
    'config_digest',
    'initialize_tree',
    'nearest',
    'near_radius',
    'near',
    'steer',
    'edge_is_free',
    'choose_parent',
    'insert_node',
    'rewire',
    'extend_tree',
    'sample_uniform_free',
    'extract_path',
    'plan_rrt_star',
    'AngleSchedule',
    'AdvanceRule',
    'ADRRTStarConfig',
    'RegionParams',
    'ConnectivityRegion',
    'expansion_scale',
    'build_region',
    'bounded_sample',
    'should_widen',
    'widen',
    'advance_anchor',
    'prune_path',
    'plan_ad_rrt_star',
]
