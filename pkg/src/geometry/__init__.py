"""
Geometry primitives and collision predicates.
"""

from .primitives import (
    Point2,
    Disc,
    Segment,
    Sector,
    SECTOR_ANGLE_TOLERANCE,
    wrap_angle,
    euclidean_distance,
    xy_distance,
    angle_of,
    segment_hits_disc,
    segment_hits_any,
    point_in_sector,
    point_in_disc,
)

__all__ = [
    'Point2',
    'Disc',
    'Segment',
    'Sector',
    'SECTOR_ANGLE_TOLERANCE',
    'wrap_angle',
    'euclidean_distance',
    'xy_distance',
    'angle_of',
    'segment_hits_disc',
    'segment_hits_any',
    'point_in_sector',
    'point_in_disc',
]
