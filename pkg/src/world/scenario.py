"""
Scenario model: configuration space bounds, the obstacle region, source and
destination, and the feasible path type.
"""
import math
from enum import Enum
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

from ..geometry import Disc, Point2, euclidean_distance, point_in_disc, segment_hits_any
from ..utils.rng import MAX_SEED


class ScenarioKind(str, Enum):
    """Obstacle distribution families."""
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    S4 = "S4"
    S5 = "S5"
    S6 = "S6"
    CUSTOM = "Custom"


KIND_OBSTACLE_COUNTS: Dict[ScenarioKind, int] = {
    ScenarioKind.S1: 50,
    ScenarioKind.S2: 50,
    ScenarioKind.S3: 68,
    ScenarioKind.S4: 70,
    ScenarioKind.S5: 80,
    ScenarioKind.S6: 85,
}


class Scenario(BaseModel):
    """Workspace Z = [0, width] x [0, height] with disc obstacles Z_obs."""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    width: float = Field(gt=0.0)
    height: float = Field(gt=0.0)
    obstacles: Tuple[Disc, ...] = ()
    source: Point2
    destination: Point2
    kind: ScenarioKind = ScenarioKind.CUSTOM
    seed: int = Field(default=0, ge=0, le=MAX_SEED)
    # requested obstacle count when a generator overrode the kind default
    nominal_count: Optional[int] = Field(default=None, ge=0)

    _centers: np.ndarray = PrivateAttr()
    _radii_sq: np.ndarray = PrivateAttr()

    @model_validator(mode="after")
    def _check_invariants(self) -> "Scenario":
        for index, disc in enumerate(self.obstacles):
            if not self.in_bounds(disc.center.x, disc.center.y):
                raise ValueError(f"obstacle {index} center lies outside the map")
        for label, point in (("source", self.source), ("destination", self.destination)):
            if not self.in_bounds(point.x, point.y):
                raise ValueError(f"{label} lies outside the map")
            for index, disc in enumerate(self.obstacles):
                if point_in_disc(point, disc):
                    raise ValueError(f"{label} lies inside obstacle {index}")
        if self.kind != ScenarioKind.CUSTOM:
            expected = self.nominal_count if self.nominal_count is not None else KIND_OBSTACLE_COUNTS[self.kind]
            if len(self.obstacles) != expected:
                raise ValueError(
                    f"kind {self.kind.value} expects {expected} obstacles, found {len(self.obstacles)}"
                )
        return self

    def model_post_init(self, __context) -> None:
        if self.obstacles:
            self._centers = np.array([[d.center.x, d.center.y] for d in self.obstacles], dtype=float)
            self._radii_sq = np.array([d.radius * d.radius for d in self.obstacles], dtype=float)
        else:
            self._centers = np.empty((0, 2), dtype=float)
            self._radii_sq = np.empty(0, dtype=float)

    def __eq__(self, other: object) -> bool:
        # field-wise; the cached arrays are derived
        if not isinstance(other, Scenario):
            return NotImplemented
        return self.__dict__ == other.__dict__

    def __hash__(self) -> int:
        return hash((self.width, self.height, self.obstacles, self.source, self.destination, self.kind, self.seed))

    @property
    def diagonal(self) -> float:
        return math.sqrt(self.width * self.width + self.height * self.height)

    @property
    def obstacle_centers(self) -> np.ndarray:
        return self._centers

    @property
    def obstacle_radii_sq(self) -> np.ndarray:
        return self._radii_sq

    def in_bounds(self, x: float, y: float) -> bool:
        return 0.0 <= x <= self.width and 0.0 <= y <= self.height

    def free_xy(self, x: float, y: float) -> bool:
        """Z_free membership for raw coordinates; disc boundaries are not free."""
        if not self.in_bounds(x, y):
            return False
        if self._centers.shape[0] == 0:
            return True
        dx = self._centers[:, 0] - x
        dy = self._centers[:, 1] - y
        return not bool(np.any(dx * dx + dy * dy <= self._radii_sq))

    def edge_free_xy(self, ax: float, ay: float, bx: float, by: float) -> bool:
        if not (self.in_bounds(ax, ay) and self.in_bounds(bx, by)):
            return False
        return not segment_hits_any(ax, ay, bx, by, self._centers, self._radii_sq)


def is_free(p: Point2, scenario: Scenario) -> bool:
    """True iff p is inside the map and outside every obstacle disc."""
    return scenario.free_xy(p.x, p.y)


class Path(BaseModel):
    """A feasible end-to-end path: ordered waypoints and their summed length."""
    model_config = ConfigDict(frozen=True)

    waypoints: Tuple[Point2, ...] = Field(min_length=2)
    total_cost: float = Field(ge=0.0)

    @model_validator(mode="after")
    def _check_cost(self) -> "Path":
        expected = path_length(self.waypoints)
        if abs(self.total_cost - expected) > 1e-9 * max(1.0, expected):
            raise ValueError(f"total_cost {self.total_cost} does not match waypoint length {expected}")
        return self

    @classmethod
    def from_points(cls, points: Sequence[Point2]) -> "Path":
        return cls(waypoints=tuple(points), total_cost=path_length(points))

    @property
    def edge_count(self) -> int:
        return len(self.waypoints) - 1

    @property
    def average_cost(self) -> float:
        return self.total_cost / self.edge_count


def path_length(points: Sequence[Point2]) -> float:
    return math.fsum(euclidean_distance(a, b) for a, b in zip(points, points[1:]))
