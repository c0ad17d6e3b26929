"""
Angle-directed RRT*: sampling restricted to a sector anchored on the global
path, widened when the tree stalls and reset when the anchor advances.

The growth step is the planner_core substrate; only sample generation and
the region bookkeeping live here.
"""
import logging
import math
import time
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..geometry import Point2, Sector, angle_of, euclidean_distance, point_in_sector, xy_distance
from ..utils.errors import GlobalPlanningError, SamplingExhaustedError, ZeroVectorError
from ..utils.rng import make_rng
from ..world import Path, Scenario
from .global_planner import GlobalPath, plan_global_path, straight_line_path
from .planner_core import (
    MAX_SAMPLE_ATTEMPTS,
    GoalTracker,
    RRTStarConfig,
    SamplingStats,
    assert_tree_healthy,
    extend_tree,
    extract_path,
    finish_run,
    initialize_tree,
    nearest,
    sample_uniform_free,
)
from .result import PlannerKind, PlanResult, RegionEvent, SampleAudit
from .tree import Tree

logger = logging.getLogger(__name__)

# widened angles this close to the cap snap onto it
_ANGLE_SNAP = 1e-9


class AngleSchedule(BaseModel):
    """Half-angle schedule in radians."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    initial_half_angle: float = Field(default=0.0, ge=0.0, le=math.pi)
    increment: float = Field(default=math.pi / 12.0, gt=0.0)
    max_half_angle: float = Field(default=math.pi, ge=0.0, le=math.pi)
    stall_iterations: int = Field(default=200, ge=1)
    # optional wall-clock trigger; breaks run-to-run determinism when set
    stall_seconds: Optional[float] = Field(default=None, gt=0.0)

    @model_validator(mode="after")
    def _ordered(self) -> "AngleSchedule":
        if self.initial_half_angle > self.max_half_angle:
            raise ValueError("initial_half_angle exceeds max_half_angle")
        return self


class AdvanceRule(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    reach_distance: Optional[float] = Field(default=None, gt=0.0)  # None -> 1.5 * step
    enabled: bool = True


class ADRRTStarConfig(RRTStarConfig):
    """RRT* configuration plus global routing, sector and pruning settings."""
    cell_size: float = Field(default=20.0, gt=0.0)
    inflation: Optional[float] = Field(default=None, ge=0.0)
    expansion_factor: float = Field(default=10.0, gt=0.0)
    map_extent: Optional[float] = Field(default=None, gt=0.0)  # None -> map diagonal
    angle: AngleSchedule = Field(default_factory=AngleSchedule)
    advance: AdvanceRule = Field(default_factory=AdvanceRule)
    shortcut: bool = True
    audit: bool = False

    def region_params(self, scenario: Scenario) -> "RegionParams":
        extent = self.map_extent if self.map_extent is not None else scenario.diagonal
        reach = self.advance.reach_distance
        return RegionParams(
            step=self.steer.step,
            expansion_scale=expansion_scale(extent, self.expansion_factor),
            reach_distance=reach if reach is not None else 1.5 * self.steer.step,
            initial_half_angle=self.angle.initial_half_angle,
            advance_enabled=self.advance.enabled,
        )


class RegionParams(BaseModel):
    """Resolved, per-scenario inputs to region construction."""
    model_config = ConfigDict(frozen=True)

    step: float = Field(gt=0.0)
    expansion_scale: float = Field(gt=0.0)
    reach_distance: float = Field(gt=0.0)
    initial_half_angle: float = Field(default=0.0, ge=0.0, le=math.pi)
    advance_enabled: bool = True


class ConnectivityRegion(BaseModel):
    """Current sampling sector and where along the global path it is anchored."""
    model_config = ConfigDict(frozen=True)

    sector: Sector
    anchor_waypoint_index: int = Field(ge=0)
    expansion_scale: float = Field(gt=0.0)
    target_waypoint_index: int = Field(ge=0)

    @model_validator(mode="after")
    def _covers_scale(self) -> "ConnectivityRegion":
        if self.sector.length < self.expansion_scale:
            raise ValueError("sector shorter than the expansion scale")
        return self


def expansion_scale(map_extent: float, factor: float) -> float:
    if map_extent <= 0 or factor <= 0:
        raise ValueError("map extent and expansion factor must be positive")
    return map_extent / factor


def _target_index(anchor: Point2, gpath: GlobalPath, anchor_idx: int, reach: float) -> int:
    last = len(gpath.waypoints) - 1
    for index in range(anchor_idx + 1, last + 1):
        if euclidean_distance(anchor, gpath.waypoints[index]) > reach:
            return index
    return last


def build_region(
    anchor: Point2,
    gpath: GlobalPath,
    anchor_idx: int,
    half_angle: float,
    params: RegionParams,
) -> ConnectivityRegion:
    """Sector at `anchor` aimed at the first global waypoint beyond reach."""
    if not 0 <= anchor_idx < len(gpath.waypoints):
        raise IndexError(f"anchor index {anchor_idx} outside global path")
    target_idx = _target_index(anchor, gpath, anchor_idx, params.reach_distance)
    target = gpath.waypoints[target_idx]
    try:
        heading = angle_of(anchor, target)
    except ZeroVectorError:
        try:
            heading = angle_of(anchor, gpath.waypoints[-1])
        except ZeroVectorError:
            heading = 0.0
    length = max(params.expansion_scale, euclidean_distance(anchor, target) + params.step)
    return ConnectivityRegion(
        sector=Sector(apex=anchor, heading=heading, half_angle=half_angle, length=length),
        anchor_waypoint_index=anchor_idx,
        expansion_scale=params.expansion_scale,
        target_waypoint_index=target_idx,
    )


def _farthest_corner(apex: Point2, scenario: Scenario) -> float:
    return max(
        xy_distance(apex.x, apex.y, cx, cy)
        for cx in (0.0, scenario.width)
        for cy in (0.0, scenario.height)
    )


def bounded_sample(
    region: ConnectivityRegion,
    scenario: Scenario,
    rng: np.random.Generator,
    stats: Optional[SamplingStats] = None,
    max_attempts: int = MAX_SAMPLE_ATTEMPTS,
) -> Point2:
    """
    Area-uniform draw over sector ∩ map ∩ Z_free by polar rejection sampling.
    A zero half-angle samples uniformly along the ray; a full disc that
    covers the whole map falls back to plain uniform sampling.
    """
    sector = region.sector
    if sector.is_full_disc and sector.length >= _farthest_corner(sector.apex, scenario):
        return sample_uniform_free(scenario, rng, stats, max_attempts)

    apex = sector.apex
    for _ in range(max_attempts):
        u_angle = float(rng.random())
        u_radius = float(rng.random())
        if sector.half_angle == 0.0:
            theta = sector.heading
            radius = sector.length * u_radius
        else:
            theta = sector.heading + (2.0 * u_angle - 1.0) * sector.half_angle
            radius = sector.length * math.sqrt(u_radius)
        x = apex.x + radius * math.cos(theta)
        y = apex.y + radius * math.sin(theta)
        if scenario.free_xy(x, y):
            candidate = Point2(x=x, y=y)
            if point_in_sector(candidate, sector):
                return candidate
        if stats is not None:
            stats.rejected += 1
    raise SamplingExhaustedError(
        f"no free sample in sector (half-angle {sector.half_angle:.4f}) after {max_attempts} draws"
    )


def should_widen(iterations_since_progress: int, schedule: AngleSchedule, idle_seconds: float = 0.0) -> bool:
    if iterations_since_progress >= schedule.stall_iterations:
        return True
    return schedule.stall_seconds is not None and idle_seconds >= schedule.stall_seconds


def widen(half_angle: float, schedule: AngleSchedule) -> float:
    widened = half_angle + schedule.increment
    if widened >= schedule.max_half_angle - _ANGLE_SNAP:
        return schedule.max_half_angle
    return widened


def advance_anchor(
    tree: Tree,
    gpath: GlobalPath,
    current: ConnectivityRegion,
    params: RegionParams,
) -> ConnectivityRegion:
    """
    Move the apex onto the tree vertex nearest the target waypoint once it is
    within reach, aim at the next waypoint and reset the half-angle. Returns
    `current` itself when nothing moves.
    """
    last = len(gpath.waypoints) - 1
    target_idx = current.target_waypoint_index
    if not params.advance_enabled or target_idx >= last:
        return current
    target = gpath.waypoints[target_idx]
    index = nearest(tree, target)
    x, y = tree.xy(index)
    if xy_distance(x, y, target.x, target.y) > params.reach_distance:
        return current
    return build_region(tree.position(index), gpath, target_idx, params.initial_half_angle, params)


def prune_path(tree: Tree, best_goal_vertex: int, scenario: Scenario, shortcut: bool = True) -> Path:
    """
    Root-to-goal parent walk, optionally shortened by greedy farthest-visible
    shortcuts. A shortcut is only taken when it is collision-free and no
    longer than the waypoints it replaces.
    """
    raw = extract_path(tree, best_goal_vertex)
    points = list(raw.waypoints)
    if not shortcut or len(points) < 3:
        return raw

    kept: List[Point2] = [points[0]]
    i = 0
    last = len(points) - 1
    while i < last:
        j = last
        while j > i + 1:
            a, b = points[i], points[j]
            skipped = math.fsum(euclidean_distance(p, q) for p, q in zip(points[i:j], points[i + 1 : j + 1]))
            if euclidean_distance(a, b) <= skipped and scenario.edge_free_xy(a.x, a.y, b.x, b.y):
                break
            j -= 1
        kept.append(points[j])
        i = j
    return Path.from_points(kept)


def resolve_global_path(scenario: Scenario, cfg: ADRRTStarConfig) -> GlobalPath:
    try:
        return plan_global_path(scenario, cfg.cell_size, cfg.inflation)
    except GlobalPlanningError as e:
        logger.warning("Global routing failed (%s); falling back to a straight segment", e)
        return straight_line_path(scenario)


def plan_ad_rrt_star(scenario: Scenario, cfg: Optional[ADRRTStarConfig] = None) -> PlanResult:
    """Run N iterations of sector-restricted RRT* seeded by the global path."""
    cfg = cfg or ADRRTStarConfig()
    near_params = cfg.resolved_near(scenario)
    params = cfg.region_params(scenario)
    schedule = cfg.angle
    gpath = resolve_global_path(scenario, cfg)

    rng = make_rng(cfg.seed)
    tree = initialize_tree(scenario.source)
    tracker = GoalTracker(scenario.destination, cfg.goal_radius)
    stats = SamplingStats()
    region = build_region(scenario.source, gpath, 0, schedule.initial_half_angle, params)
    events = [RegionEvent(iteration=0, reason="initial", anchor_waypoint_index=0, half_angle=region.sector.half_angle)]
    audit: List[SampleAudit] = []
    rewires = widenings = advancements = 0
    stall = 0
    phase_best = math.inf

    def rebuild(iteration: int, half_angle: float, reason: str) -> ConnectivityRegion:
        rebuilt = build_region(region.sector.apex, gpath, region.anchor_waypoint_index, half_angle, params)
        events.append(RegionEvent(
            iteration=iteration, reason=reason,
            anchor_waypoint_index=rebuilt.anchor_waypoint_index, half_angle=half_angle,
        ))
        return rebuilt

    logger.info(
        "AD-RRT*: %d iterations, %d global waypoints%s, seed %d",
        cfg.max_iterations, len(gpath.waypoints), " (fallback)" if gpath.fallback else "", cfg.seed,
    )
    start = time.perf_counter()
    last_progress = start
    for iteration in range(cfg.max_iterations):
        sample: Optional[Point2] = None
        if rng.random() < cfg.goal_bias and point_in_sector(scenario.destination, region.sector):
            sample = scenario.destination
        while sample is None:
            try:
                sample = bounded_sample(region, scenario, rng, stats)
            except SamplingExhaustedError:
                if region.sector.half_angle >= schedule.max_half_angle:
                    events.append(RegionEvent(
                        iteration=iteration, reason="exhausted",
                        anchor_waypoint_index=region.anchor_waypoint_index,
                        half_angle=region.sector.half_angle,
                    ))
                    break
                region = rebuild(iteration, widen(region.sector.half_angle, schedule), "exhausted")
                widenings += 1
        if sample is None:
            continue

        sector = region.sector
        new_index, rewired = extend_tree(tree, sample, scenario, cfg.steer, near_params)
        stall += 1
        if new_index is not None:
            rewires += rewired
            tracker.observe(tree, new_index, iteration)
            if cfg.audit:
                audit.append(SampleAudit(iteration=iteration, sector=sector, sample=sample))
            target = gpath.waypoints[region.target_waypoint_index]
            x, y = tree.xy(new_index)
            distance = xy_distance(x, y, target.x, target.y)
            if distance < phase_best:
                phase_best = distance
                stall = 0
                last_progress = time.perf_counter()

            advanced = advance_anchor(tree, gpath, region, params)
            if advanced is not region:
                region = advanced
                advancements += 1
                stall = 0
                phase_best = math.inf
                last_progress = time.perf_counter()
                events.append(RegionEvent(
                    iteration=iteration, reason="advance",
                    anchor_waypoint_index=region.anchor_waypoint_index,
                    half_angle=region.sector.half_angle,
                ))
            if cfg.check_invariants:
                assert_tree_healthy(tree, scenario)

        idle = time.perf_counter() - last_progress if schedule.stall_seconds is not None else 0.0
        if should_widen(stall, schedule, idle):
            stall = 0
            last_progress = time.perf_counter()
            if region.sector.half_angle < schedule.max_half_angle:
                region = rebuild(iteration, widen(region.sector.half_angle, schedule), "widen")
                widenings += 1
    elapsed = time.perf_counter() - start

    path = raw_path = None
    if tracker.found:
        raw_path = extract_path(tree, tracker.best)
        path = prune_path(tree, tracker.best, scenario, cfg.shortcut)
    logger.info(
        "AD-RRT*: %d vertices, %d widenings, %d advancements, %.3fs",
        tree.size, widenings, advancements, elapsed,
    )
    return finish_run(
        PlannerKind.AD_RRT_STAR, scenario, cfg, tree, tracker,
        iterations=cfg.max_iterations, elapsed=elapsed, stats=stats, rewires=rewires,
        path=path, raw_path=raw_path,
        widenings=widenings, advancements=advancements,
        global_path=gpath, final_sector=region.sector,
        region_events=tuple(events), audit=tuple(audit),
    )
