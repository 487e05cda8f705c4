"""Convex hull, convexity defects, and minimum enclosing circle.

The hull is expressed as indices into the owning contour so defect
extraction can walk the contour arcs between consecutive hull anchors,
matching the start/end/far triple the classifier consumes.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

import numpy as np

from .errors import NoPointsError
from .validation import check_contour

_CIRCLE_SEED = 0x1F5  # fixed shuffle seed keeps results run-to-run identical


@dataclass(frozen=True)
class Hull:
    """Convex hull of a contour as ascending contour-point indices."""

    indices: np.ndarray


@dataclass(frozen=True)
class Defect:
    """One convexity defect between consecutive hull anchors.

    ``far_idx`` is the contour point deepest below the chord from
    ``start_idx`` to ``end_idx``; ``depth`` is its perpendicular distance
    to that chord. Depth ties resolve to the earliest contour index
    after ``start_idx``.
    """

    start_idx: int
    end_idx: int
    far_idx: int
    depth: float


@dataclass(frozen=True)
class Circle:
    center: tuple[float, float]
    radius: float


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _monotone_chain(points: list[tuple[float, float]]) -> list[tuple[float, float]]:
    """Strict convex hull (collinear boundary points dropped)."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list[tuple[float, float]] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[tuple[float, float]] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def convex_hull(c) -> Hull:
    """Convex hull of the contour's points, as contour indices.

    Vertices are the strict hull corners (collinear boundary points are
    excluded); each maps to its first occurrence along the contour and
    the result is sorted ascending, which for a traced border is the
    hull in contour-traversal order.
    """
    pts = check_contour(c)
    tuples = [(float(x), float(y)) for x, y in pts]
    vertices = set(_monotone_chain(tuples))
    indices = []
    seen = set()
    for i, t in enumerate(tuples):
        if t in vertices and t not in seen:
            indices.append(i)
            seen.add(t)
    return Hull(indices=np.array(sorted(indices), dtype=np.int64))


def hull_polygon_area(c, h: Hull) -> float:
    """Area of the hull polygon (vertices sorted angularly, shoelace)."""
    pts = check_contour(c)
    verts = pts[h.indices].astype(np.float64)
    if len(verts) < 3:
        return 0.0
    center = verts.mean(axis=0)
    order = np.argsort(np.arctan2(verts[:, 1] - center[1], verts[:, 0] - center[0]))
    v = verts[order]
    x, y = v[:, 0], v[:, 1]
    return abs(float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))) * 0.5


def convexity_defects(c, h: Hull) -> list[Defect]:
    """Defects between each pair of consecutive hull anchors.

    For every hull edge, the contour points strictly between the two
    anchors are checked; if any lies off the chord, one defect is
    emitted with the farthest of them. Convex contours yield an empty
    list; degenerate chords (coincident anchor coordinates) yield none.
    """
    pts = check_contour(c)
    n = len(pts)
    idx = h.indices
    if len(idx) < 2:
        return []
    defects = []
    for k in range(len(idx)):
        i = int(idx[k])
        j = int(idx[(k + 1) % len(idx)])
        interior = np.arange(i + 1, (j if j > i else j + n)) % n
        if interior.size == 0:
            continue
        a = pts[i].astype(np.float64)
        b = pts[j].astype(np.float64)
        chord = b - a
        length = math.hypot(chord[0], chord[1])
        if length == 0.0:
            continue
        rel = pts[interior].astype(np.float64) - a
        dist = np.abs(chord[0] * rel[:, 1] - chord[1] * rel[:, 0]) / length
        best = int(np.argmax(dist))
        depth = float(dist[best])
        if depth > 0.0:
            defects.append(
                Defect(start_idx=i, end_idx=j, far_idx=int(interior[best]), depth=depth)
            )
    return defects


def min_enclosing_circle(points) -> Circle:
    """Smallest circle containing every point (Welzl-style incremental).

    Containment is exact to ~1e-12 relative tolerance. The internal
    shuffle uses a fixed seed so identical inputs give bit-identical
    results across runs.
    """
    arr = np.asarray(points, dtype=np.float64)
    if arr.size == 0:
        raise NoPointsError("minimum enclosing circle needs at least one point")
    coords = [(float(x), float(y)) for x, y in np.atleast_2d(arr)]
    shuffled = list(coords)
    random.Random(_CIRCLE_SEED).shuffle(shuffled)

    c = None
    for i, p in enumerate(shuffled):
        if c is None or not _in_circle(c, p):
            c = _circle_one_point(shuffled[: i + 1], p)
    return Circle(center=(c[0], c[1]), radius=c[2])


def _circle_one_point(points, p):
    c = (p[0], p[1], 0.0)
    for i, q in enumerate(points):
        if not _in_circle(c, q):
            if c[2] == 0.0:
                c = _diameter(p, q)
            else:
                c = _circle_two_points(points[: i + 1], p, q)
    return c


def _circle_two_points(points, p, q):
    circ = _diameter(p, q)
    left = None
    right = None
    px, py = p
    qx, qy = q
    for r in points:
        if _in_circle(circ, r):
            continue
        cross = (qx - px) * (r[1] - py) - (qy - py) * (r[0] - px)
        c = _circumcircle(p, q, r)
        if c is None:
            continue
        d = (qx - px) * (c[1] - py) - (qy - py) * (c[0] - px)
        if cross > 0.0 and (
            left is None
            or d > (qx - px) * (left[1] - py) - (qy - py) * (left[0] - px)
        ):
            left = c
        elif cross < 0.0 and (
            right is None
            or d < (qx - px) * (right[1] - py) - (qy - py) * (right[0] - px)
        ):
            right = c
    if left is None and right is None:
        return circ
    if left is None:
        return right
    if right is None:
        return left
    return left if left[2] <= right[2] else right


def _diameter(a, b):
    cx = (a[0] + b[0]) / 2.0
    cy = (a[1] + b[1]) / 2.0
    r = max(math.hypot(cx - a[0], cy - a[1]), math.hypot(cx - b[0], cy - b[1]))
    return (cx, cy, r)


def _circumcircle(a, b, c):
    # Center relative to the bounding-box midpoint for numerical stability.
    ox = (min(a[0], b[0], c[0]) + max(a[0], b[0], c[0])) / 2.0
    oy = (min(a[1], b[1], c[1]) + max(a[1], b[1], c[1])) / 2.0
    ax, ay = a[0] - ox, a[1] - oy
    bx, by = b[0] - ox, b[1] - oy
    cx, cy = c[0] - ox, c[1] - oy
    d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2.0
    if d == 0.0:
        return None
    x = ox + ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d
    y = oy + ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d
    r = max(
        math.hypot(x - a[0], y - a[1]),
        math.hypot(x - b[0], y - b[1]),
        math.hypot(x - c[0], y - c[1]),
    )
    return (x, y, r)


def _in_circle(c, p) -> bool:
    return math.hypot(p[0] - c[0], p[1] - c[1]) <= c[2] * (1.0 + 1e-12) + 1e-12
