"""
Exact 2D primitives: points, segments, discs, angular sectors, distances and
collision predicates used by every planner.

Angles are radians. Distances are computed as sqrt(dx*dx + dy*dy) in both the
scalar and the batched (numpy) paths so results agree bit for bit.
"""
import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..utils.errors import ZeroVectorError

TWO_PI = 2.0 * math.pi

# Angular slack for sector membership; absorbs atan2 round-off on the boundary.
SECTOR_ANGLE_TOLERANCE = 1e-9


def wrap_angle(angle: float) -> float:
    """Normalize an angle to [-pi, pi); in-range angles come back unchanged."""
    if -math.pi <= angle < math.pi:
        return angle
    wrapped = (angle + math.pi) % TWO_PI - math.pi
    # the modulo can land exactly on pi through rounding
    return -math.pi if wrapped >= math.pi else wrapped


class Point2(BaseModel):
    """A configuration in the 2D workspace."""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    x: float
    y: float

    def as_tuple(self) -> Tuple[float, float]:
        return (self.x, self.y)


class Disc(BaseModel):
    """A closed disc obstacle."""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    center: Point2
    radius: float = Field(gt=0.0)


class Segment(BaseModel):
    """The straight local path between two states; may be zero-length."""
    model_config = ConfigDict(frozen=True)

    a: Point2
    b: Point2

    @property
    def length(self) -> float:
        return euclidean_distance(self.a, self.b)


class Sector(BaseModel):
    """Angle-bounded sampling region: apex, heading, half-angle and length."""
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    apex: Point2
    heading: float
    half_angle: float = Field(ge=0.0, le=math.pi)
    length: float = Field(ge=0.0)

    @field_validator("heading")
    @classmethod
    def _normalize_heading(cls, value: float) -> float:
        return wrap_angle(value)

    @property
    def is_full_disc(self) -> bool:
        return self.half_angle >= math.pi


def euclidean_distance(a: Point2, b: Point2) -> float:
    """Distance between two points."""
    return xy_distance(a.x, a.y, b.x, b.y)


def xy_distance(ax: float, ay: float, bx: float, by: float) -> float:
    dx = bx - ax
    dy = by - ay
    return math.sqrt(dx * dx + dy * dy)


def angle_of(origin: Point2, target: Point2) -> float:
    """Principal angle in [-pi, pi) of the vector target - origin."""
    dx = target.x - origin.x
    dy = target.y - origin.y
    if dx == 0.0 and dy == 0.0:
        raise ZeroVectorError(f"angle undefined between coincident points {origin.as_tuple()}")
    return wrap_angle(math.atan2(dy, dx))


def _segment_clearance_sq(ax: float, ay: float, bx: float, by: float, cx: float, cy: float) -> float:
    """Squared distance from (cx, cy) to the closed segment a-b."""
    dx = bx - ax
    dy = by - ay
    length_sq = dx * dx + dy * dy
    if length_sq == 0.0:
        t = 0.0
    else:
        t = ((cx - ax) * dx + (cy - ay) * dy) / length_sq
        t = min(1.0, max(0.0, t))
    px = ax + t * dx - cx
    py = ay + t * dy - cy
    return px * px + py * py


def segment_hits_disc(segment: Segment, disc: Disc) -> bool:
    """True iff the closed segment touches the closed disc (contact counts)."""
    clearance_sq = _segment_clearance_sq(
        segment.a.x, segment.a.y, segment.b.x, segment.b.y,
        disc.center.x, disc.center.y,
    )
    return clearance_sq <= disc.radius * disc.radius


def segment_hits_any(
    ax: float, ay: float, bx: float, by: float,
    centers: np.ndarray, radii_sq: np.ndarray,
) -> bool:
    """Batched segment_hits_disc against arrays of disc centers and squared radii."""
    if centers.shape[0] == 0:
        return False
    dx = bx - ax
    dy = by - ay
    length_sq = dx * dx + dy * dy
    cx = centers[:, 0]
    cy = centers[:, 1]
    if length_sq == 0.0:
        t = np.zeros_like(cx)
    else:
        t = np.clip(((cx - ax) * dx + (cy - ay) * dy) / length_sq, 0.0, 1.0)
    px = ax + t * dx - cx
    py = ay + t * dy - cy
    return bool(np.any(px * px + py * py <= radii_sq))


def point_in_sector(p: Point2, sector: Sector) -> bool:
    """True iff p is within the sector's length and angular extent."""
    dx = p.x - sector.apex.x
    dy = p.y - sector.apex.y
    if dx == 0.0 and dy == 0.0:
        return True
    if math.sqrt(dx * dx + dy * dy) > sector.length:
        return False
    if sector.is_full_disc:
        return True
    deviation = abs(wrap_angle(math.atan2(dy, dx) - sector.heading))
    return deviation <= sector.half_angle + SECTOR_ANGLE_TOLERANCE


def point_in_disc(p: Point2, disc: Disc) -> bool:
    """Closed-disc membership."""
    dx = p.x - disc.center.x
    dy = p.y - disc.center.y
    return dx * dx + dy * dy <= disc.radius * disc.radius
