"""Plane perfect matching flips on integer point sets.

Exact integer geometry, flip enumeration, exact flip distance by
bidirectional BFS, and a compiler that turns a planar vertex cover
instance into a pair of matchings whose flip distance encodes the
cover, together with machine-checked audits of every geometric
predicate the construction relies on.
"""

from .geometry import Point, Segment, orient, segments_cross, crossing_count
from .matching import PointSet, PlaneMatching, FlipMove, validate, enumerate_flips, apply_flip

__all__ = [
    "Point",
    "Segment",
    "orient",
    "segments_cross",
    "crossing_count",
    "PointSet",
    "PlaneMatching",
    "FlipMove",
    "validate",
    "enumerate_flips",
    "apply_flip",
]
