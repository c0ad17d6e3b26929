"""
RRT* substrate shared by both planners and the baseline RRT* loop.

One extension step is: nearest -> steer -> collision check -> near ->
choose parent -> insert -> rewire. Both planners call the same `extend_tree`
so the only thing that differs between them is where samples come from.
"""
import hashlib
import json
import logging
import math
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..geometry import Point2, xy_distance
from ..utils.errors import NoPathFoundError, SamplingExhaustedError, ZeroVectorError
from ..utils.rng import MAX_SEED, make_rng
from ..world import Path, Scenario, scenario_digest
from .result import PlanMetrics, PlannerKind, PlanResult
from .tree import Tree, check_tree_invariants

logger = logging.getLogger(__name__)

MAX_SAMPLE_ATTEMPTS = 10_000


class SteerParams(BaseModel):
    """Incremental distance and the minimum spacing between a new vertex and the tree."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    step: float = Field(default=30.0, gt=0.0)
    # new vertices closer than this to an existing vertex are discarded; 0 disables
    min_separation: float = Field(default=7.5, ge=0.0)


class NearParams(BaseModel):
    """Shrinking-ball radius gamma * (ln n / n)^(1/dim), floored at radius_floor."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    gamma: float = Field(gt=0.0)
    dim: int = Field(default=2, ge=2, le=2)
    radius_floor: float = Field(default=0.0, ge=0.0)

    @classmethod
    def for_scenario(cls, scenario: Scenario, steer: SteerParams) -> "NearParams":
        return cls(gamma=2.0 * scenario.diagonal / math.sqrt(math.pi), radius_floor=2.0 * steer.step)


class RRTStarConfig(BaseModel):
    """Baseline RRT* configuration; `near` is resolved per scenario when omitted."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    max_iterations: int = Field(default=5000, ge=1)
    steer: SteerParams = Field(default_factory=SteerParams)
    near: Optional[NearParams] = None
    goal_radius: float = Field(default=25.0, gt=0.0)
    goal_bias: float = Field(default=0.05, ge=0.0, le=1.0)
    seed: int = Field(default=0, ge=0, le=MAX_SEED)
    check_invariants: bool = False

    def resolved_near(self, scenario: Scenario) -> NearParams:
        return self.near if self.near is not None else NearParams.for_scenario(scenario, self.steer)


def config_digest(config: BaseModel) -> str:
    """Stable hash over the sorted JSON form of a planner configuration."""
    payload = json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass
class SamplingStats:
    """Counts draws rejected for lying outside the free space."""
    rejected: int = 0


# ---------------------------------------------------------------------------
# Tree operations
# ---------------------------------------------------------------------------

def initialize_tree(src: Point2) -> Tree:
    return Tree(src)


def nearest(tree: Tree, q: Point2) -> int:
    """Index of the vertex closest to q; argmin keeps the lowest index on ties."""
    return int(np.argmin(tree.distances_to(q.x, q.y)))


def near_radius(params: NearParams, n: int) -> float:
    if n < 1:
        raise ValueError("near_radius needs at least one vertex")
    ball = params.gamma * (math.log(n) / n) ** (1.0 / params.dim)
    return max(params.radius_floor, ball)


def near(tree: Tree, q: Point2, radius: float) -> List[int]:
    """Vertices in the closed ball of `radius` around q, ascending by index."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    return np.flatnonzero(tree.distances_to(q.x, q.y) <= radius).tolist()


def steer(from_point: Point2, toward: Point2, params: SteerParams) -> Point2:
    dx = toward.x - from_point.x
    dy = toward.y - from_point.y
    if dx == 0.0 and dy == 0.0:
        raise ZeroVectorError(f"cannot steer from {from_point.as_tuple()} toward itself")
    distance = math.sqrt(dx * dx + dy * dy)
    if distance <= params.step:
        return toward
    scale = params.step / distance
    return Point2(x=from_point.x + dx * scale, y=from_point.y + dy * scale)


def edge_is_free(a: Point2, b: Point2, scenario: Scenario) -> bool:
    return scenario.edge_free_xy(a.x, a.y, b.x, b.y)


def choose_parent(
    tree: Tree,
    candidates: Sequence[int],
    fallback: int,
    new_pos: Point2,
    scenario: Scenario,
) -> int:
    """Cheapest collision-free parent for new_pos; the fallback edge is already known free."""
    ranked = []
    for index in set(candidates) | {fallback}:
        x, y = tree.xy(index)
        ranked.append((tree.cost(index) + xy_distance(x, y, new_pos.x, new_pos.y), index))
    ranked.sort()
    for _, index in ranked:
        if index == fallback:
            return index
        x, y = tree.xy(index)
        if scenario.edge_free_xy(x, y, new_pos.x, new_pos.y):
            return index
    return fallback


def insert_node(tree: Tree, parent: int, pos: Point2) -> int:
    px, py = tree.xy(parent)
    return tree.append(parent, pos.x, pos.y, tree.cost(parent) + xy_distance(px, py, pos.x, pos.y))


def rewire(tree: Tree, near_vertices: Sequence[int], new_vertex: int, scenario: Scenario) -> int:
    """Reparent neighbors that become strictly cheaper through new_vertex; returns the count."""
    nx, ny = tree.xy(new_vertex)
    new_cost = tree.cost(new_vertex)
    skip = {new_vertex, tree.parent(new_vertex)}
    rewired = 0
    for index in near_vertices:
        if index in skip:
            continue
        x, y = tree.xy(index)
        through = new_cost + xy_distance(nx, ny, x, y)
        if through < tree.cost(index) and scenario.edge_free_xy(nx, ny, x, y):
            tree.reparent(index, new_vertex, through)
            rewired += 1
    return rewired


def extend_tree(
    tree: Tree,
    sample: Point2,
    scenario: Scenario,
    steer_params: SteerParams,
    near_params: NearParams,
) -> Tuple[Optional[int], int]:
    """
    One RRT* extension toward `sample`. Returns (new vertex index or None, rewire count).
    """
    nearest_index = nearest(tree, sample)
    nx, ny = tree.xy(nearest_index)
    if nx == sample.x and ny == sample.y:
        return None, 0
    z_new = steer(tree.position(nearest_index), sample, steer_params)
    if not scenario.edge_free_xy(nx, ny, z_new.x, z_new.y):
        return None, 0
    if steer_params.min_separation > 0.0:
        if float(tree.distances_to(z_new.x, z_new.y).min()) < steer_params.min_separation:
            return None, 0

    radius = near_radius(near_params, tree.size)
    candidates = near(tree, z_new, radius)
    parent = choose_parent(tree, candidates, nearest_index, z_new, scenario)
    new_index = insert_node(tree, parent, z_new)
    return new_index, rewire(tree, candidates, new_index, scenario)


def sample_uniform_free(
    scenario: Scenario,
    rng: np.random.Generator,
    stats: Optional[SamplingStats] = None,
    max_attempts: int = MAX_SAMPLE_ATTEMPTS,
) -> Point2:
    """Uniform draw over the map, rejecting points inside obstacles."""
    for _ in range(max_attempts):
        x = float(rng.random()) * scenario.width
        y = float(rng.random()) * scenario.height
        if scenario.free_xy(x, y):
            return Point2(x=x, y=y)
        if stats is not None:
            stats.rejected += 1
    raise SamplingExhaustedError(f"no free sample after {max_attempts} draws")


def extract_path(tree: Tree, index: int) -> Path:
    """Root-to-vertex waypoint sequence by parent walk."""
    points = [tree.position(i) for i in tree.path_to_root(index)]
    if len(points) == 1:
        points.append(points[0])
    return Path.from_points(points)


# ---------------------------------------------------------------------------
# Goal tracking and result assembly
# ---------------------------------------------------------------------------

@dataclass
class GoalTracker:
    """Goal-region vertices and the best-cost history of one run."""
    destination: Point2
    goal_radius: float
    vertices: List[int] = field(default_factory=list)
    best: Optional[int] = None
    best_cost: float = math.inf
    trace: List[Tuple[int, float]] = field(default_factory=list)
    first_iteration: Optional[int] = None

    def observe(self, tree: Tree, new_index: int, iteration: int) -> None:
        x, y = tree.xy(new_index)
        if xy_distance(x, y, self.destination.x, self.destination.y) <= self.goal_radius:
            self.vertices.append(new_index)
            if self.first_iteration is None:
                self.first_iteration = iteration
                logger.debug("First goal-region vertex at iteration %d", iteration)
        if not self.vertices:
            return
        costs = tree.costs[self.vertices]
        position = int(np.argmin(costs))
        cost = float(costs[position])
        if cost < self.best_cost or (cost == self.best_cost and self.vertices[position] != self.best):
            if cost < self.best_cost:
                self.trace.append((iteration, cost))
            self.best_cost = cost
            self.best = self.vertices[position]

    @property
    def found(self) -> bool:
        return self.best is not None


def assert_tree_healthy(tree: Tree, scenario: Scenario) -> None:
    violations = check_tree_invariants(tree, scenario)
    if violations:
        raise AssertionError("tree invariant violated: " + "; ".join(violations[:5]))


def finish_run(
    planner: PlannerKind,
    scenario: Scenario,
    config: BaseModel,
    tree: Tree,
    tracker: GoalTracker,
    iterations: int,
    elapsed: float,
    stats: SamplingStats,
    rewires: int,
    path: Optional[Path] = None,
    raw_path: Optional[Path] = None,
    **extra: Any,
) -> PlanResult:
    """Build the PlanResult; raises NoPathFoundError (carrying it) when no goal vertex exists."""
    counters: Dict[str, Any] = {
        key: extra.pop(key) for key in ("widenings", "advancements") if key in extra
    }
    if tracker.found and path is None:
        path = extract_path(tree, tracker.best)
    metrics = PlanMetrics(
        node_count=tree.size,
        iterations=iterations,
        total_path_cost=path.total_cost if path is not None else None,
        average_path_cost=path.average_cost if path is not None else None,
        rejected_samples=stats.rejected,
        rewires=rewires,
        first_solution_iteration=tracker.first_iteration,
        elapsed_seconds=elapsed,
        **counters,
    )
    result = PlanResult(
        planner=planner,
        scenario_digest=scenario_digest(scenario),
        seed=config.seed,
        success=tracker.found,
        path=path,
        raw_path=raw_path,
        metrics=metrics,
        cost_trace=tuple(tracker.trace),
        tree=tree,
        config=config.model_dump(mode="json"),
        config_digest=config_digest(config),
        **extra,
    )
    if not result.success:
        raise NoPathFoundError(
            f"{planner.value}: no vertex reached the goal region in {iterations} iterations",
            result=result,
        )
    return result


# ---------------------------------------------------------------------------
# Baseline planner
# ---------------------------------------------------------------------------

def plan_rrt_star(scenario: Scenario, cfg: Optional[RRTStarConfig] = None) -> PlanResult:
    """Run N iterations of RRT* with uniform sampling over the free space."""
    cfg = cfg or RRTStarConfig()
    near_params = cfg.resolved_near(scenario)
    rng = make_rng(cfg.seed)
    tree = initialize_tree(scenario.source)
    tracker = GoalTracker(scenario.destination, cfg.goal_radius)
    stats = SamplingStats()
    rewires = 0

    logger.info("RRT*: %d iterations, step %.2f, seed %d", cfg.max_iterations, cfg.steer.step, cfg.seed)
    start = time.perf_counter()
    for iteration in range(cfg.max_iterations):
        if rng.random() < cfg.goal_bias:
            sample = scenario.destination
        else:
            sample = sample_uniform_free(scenario, rng, stats)
        new_index, rewired = extend_tree(tree, sample, scenario, cfg.steer, near_params)
        if new_index is None:
            continue
        rewires += rewired
        tracker.observe(tree, new_index, iteration)
        if cfg.check_invariants:
            assert_tree_healthy(tree, scenario)
    elapsed = time.perf_counter() - start

    logger.info("RRT*: %d vertices, best cost %s, %.3fs", tree.size, tracker.best_cost, elapsed)
    return finish_run(
        PlannerKind.RRT_STAR, scenario, cfg, tree, tracker,
        iterations=cfg.max_iterations, elapsed=elapsed, stats=stats, rewires=rewires,
    )
