"""
Deterministic S1-S6 scenario generation.

Each kind draws obstacle centers from its own spatial distribution:
  S1     80/20 mixture of a Gaussian around the source and uniform
  S2, S3 uniform over the corridor around the source-destination line
  S4     uniform over the map
  S5     Gaussian around the map center
  S6     Gaussians around source, center and destination in equal thirds
"""
import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..geometry import Disc, Point2
from ..utils.errors import GenerationFailedError
from ..utils.rng import make_rng
from .scenario import KIND_OBSTACLE_COUNTS, Scenario, ScenarioKind

logger = logging.getLogger(__name__)

MAX_PLACEMENT_ATTEMPTS = 10_000
CORNER_OFFSET = 0.05
GAUSSIAN_SIGMA = 0.15  # fraction of the map diagonal
S1_CLUSTER_SHARE = 0.8
CORRIDOR_HALF_WIDTH = 0.2  # fraction of the map width


class GenerationParams(BaseModel):
    """Map size, obstacle radius and an optional obstacle-count override."""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    width: float = Field(default=1000.0, gt=0.0)
    height: float = Field(default=1000.0, gt=0.0)
    obstacle_radius: float = Field(default=15.0, gt=0.0)
    obstacle_count: Optional[int] = Field(default=None, ge=0)


def generate_scenario(
    kind: ScenarioKind,
    seed: int,
    params: Optional[GenerationParams] = None,
) -> Scenario:
    """Build the scenario for (kind, seed, params); a pure function of its inputs."""
    kind = ScenarioKind(kind)
    if kind == ScenarioKind.CUSTOM:
        raise ValueError("Custom scenarios are loaded from files, not generated")
    params = params or GenerationParams()
    rng = make_rng(seed)

    width, height = params.width, params.height
    source = (CORNER_OFFSET * width, CORNER_OFFSET * height)
    destination = ((1.0 - CORNER_OFFSET) * width, (1.0 - CORNER_OFFSET) * height)
    count = params.obstacle_count if params.obstacle_count is not None else KIND_OBSTACLE_COUNTS[kind]
    radius = params.obstacle_radius
    clearance_sq = (2.0 * radius) ** 2

    draw = _center_sampler(kind, rng, width, height, source, destination, count)

    obstacles = []
    for index in range(count):
        for _ in range(MAX_PLACEMENT_ATTEMPTS):
            x, y = draw(index)
            if not (0.0 <= x <= width and 0.0 <= y <= height):
                continue
            if _dist_sq((x, y), source) <= clearance_sq or _dist_sq((x, y), destination) <= clearance_sq:
                continue
            obstacles.append(Disc(center=Point2(x=x, y=y), radius=radius))
            break
        else:
            raise GenerationFailedError(
                f"could not place obstacle {index} of {count} for {kind.value} "
                f"after {MAX_PLACEMENT_ATTEMPTS} attempts"
            )

    logger.info("Generated %s scenario (seed=%d) with %d obstacles", kind.value, seed, len(obstacles))
    return Scenario(
        width=width,
        height=height,
        obstacles=tuple(obstacles),
        source=Point2(x=source[0], y=source[1]),
        destination=Point2(x=destination[0], y=destination[1]),
        kind=kind,
        seed=seed,
        nominal_count=params.obstacle_count if count != KIND_OBSTACLE_COUNTS[kind] else None,
    )


def _dist_sq(a: Tuple[float, float], b: Tuple[float, float]) -> float:
    dx = a[0] - b[0]
    dy = a[1] - b[1]
    return dx * dx + dy * dy


def _center_sampler(
    kind: ScenarioKind,
    rng: np.random.Generator,
    width: float,
    height: float,
    source: Tuple[float, float],
    destination: Tuple[float, float],
    count: int,
) -> Callable[[int], Tuple[float, float]]:
    sigma = GAUSSIAN_SIGMA * math.hypot(width, height)
    center = (0.5 * width, 0.5 * height)

    def uniform(_: int) -> Tuple[float, float]:
        return float(rng.uniform(0.0, width)), float(rng.uniform(0.0, height))

    def gaussian(mean: Tuple[float, float]) -> Tuple[float, float]:
        return float(rng.normal(mean[0], sigma)), float(rng.normal(mean[1], sigma))

    if kind == ScenarioKind.S1:
        # component chosen once per obstacle so rejections do not skew the mixture
        clustered = rng.random(count) < S1_CLUSTER_SHARE

        def s1(index: int) -> Tuple[float, float]:
            if clustered[index]:
                return gaussian(source)
            return uniform(index)
        return s1

    if kind in (ScenarioKind.S2, ScenarioKind.S3):
        ux, uy = destination[0] - source[0], destination[1] - source[1]
        length = math.hypot(ux, uy)
        ux, uy = ux / length, uy / length
        half_width = CORRIDOR_HALF_WIDTH * width

        def corridor(_: int) -> Tuple[float, float]:
            along = float(rng.uniform(0.0, length))
            across = float(rng.uniform(-half_width, half_width))
            return source[0] + along * ux - across * uy, source[1] + along * uy + across * ux
        return corridor

    if kind == ScenarioKind.S4:
        return uniform

    if kind == ScenarioKind.S5:
        return lambda _: gaussian(center)

    anchors = (source, center, destination)
    return lambda index: gaussian(anchors[index % 3])
