"""Convex hull volumes and footprint areas."""

from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull, QhullError


def convex_hull_volume(points: np.ndarray) -> tuple[float, bool]:
    """Volume of the 3D convex hull of `points` in cubic meters.

    Returns (volume, degenerate). Coplanar/collinear inputs (or fewer than 4
    points) yield (0.0, True) instead of raising.
    """
    points = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    if len(points) < 4:
        return 0.0, True
    try:
        hull = ConvexHull(points)
    except QhullError:
        return 0.0, True
    return float(hull.volume), False


def footprint_area(points: np.ndarray) -> float:
    """Area of the convex hull of `points` projected onto the ground plane (z up)."""
    pts2 = np.asarray(points, dtype=np.float64).reshape(-1, 3)[:, :2]
    if len(pts2) < 3:
        return 0.0
    try:
        hull = ConvexHull(pts2)
    except QhullError:
        return 0.0
    return float(hull.volume)  # scipy: "volume" of a 2D hull is its area
