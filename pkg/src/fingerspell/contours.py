"""Border following and shape descriptors for binary masks.

A contour is an (N, 2) integer array of (x, y) pixel coordinates along
the outer border of one 8-connected foreground component, implicitly
closed. Area, perimeter, and moments all use the polygon (shoelace)
convention over those points, so every descriptor downstream shares one
geometry model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import DegenerateContourError, NoContourError
from .validation import check_binary_mask, check_contour

# Moore neighborhood in clockwise screen order (y grows downward),
# starting at the west neighbor: W, NW, N, NE, E, SE, S, SW.
_NEIGHBORS = ((-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1))
_DIR_INDEX = {off: i for i, off in enumerate(_NEIGHBORS)}

_LABEL_STRUCTURE = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True)
class Moments:
    """Raw and central polygon moments of a filled contour."""

    m00: float
    m10: float
    m01: float
    mu20: float
    mu11: float
    mu02: float

    @property
    def centroid(self) -> tuple[float, float]:
        return (self.m10 / self.m00, self.m01 / self.m00)


@dataclass(frozen=True)
class ContourFeatures:
    """Descriptor vector of one contour.

    ``bounding_rect`` is the axis-aligned (x, y, w, h) box over the
    contour points; ``aspect_ratio`` is its width over height;
    ``solidity`` is contour area over convex hull area.
    """

    area: float
    perimeter: float
    solidity: float
    aspect_ratio: float
    orientation_deg: float
    equiv_diameter: float
    bounding_rect: tuple[float, float, float, float]
    defect_count: int
    centroid: tuple[float, float]


def _moore_trace(is_fg, start: tuple[int, int]) -> list[tuple[int, int]]:
    """Follow one outer border with Moore-neighbor tracing.

    ``start`` must be the topmost-leftmost pixel of its component so the
    west neighbor is guaranteed background. The walk stops when it is
    about to retrace its first move (back at the start, heading for the
    second point again): that move fixes the successor state, so going
    on would replay the whole circuit. Plain Jacob's criterion (start
    re-entered with the starting backtrack) loops forever on some
    one-pixel-wide shapes. A visited-state set guards the walk on
    inconsistent masks.
    """
    b0 = (start[0] - 1, start[1])
    p, b = start, b0
    points = [start]
    seen = set()
    while True:
        k = _DIR_INDEX[(b[0] - p[0], b[1] - p[1])]
        for step in range(1, 9):
            j = (k + step) % 8
            q = (p[0] + _NEIGHBORS[j][0], p[1] + _NEIGHBORS[j][1])
            if is_fg(q):
                break
        else:
            return points  # isolated pixel: nothing in the neighborhood
        if p == start and len(points) > 1 and q == points[1]:
            points.pop()  # drop the closing revisit of the start pixel
            return points
        prev = (j - 1) % 8
        b = (p[0] + _NEIGHBORS[prev][0], p[1] + _NEIGHBORS[prev][1])
        p = q
        if (p, b) in seen:
            return points
        seen.add((p, b))
        points.append(p)


def trace_contours(mask) -> list[np.ndarray]:
    """Trace the outer border of every 8-connected foreground component.

    Returns one contour per component in scan order (topmost-leftmost
    start pixel first), each an (N, 2) int array of (x, y) points in a
    consistent counter-clockwise order for (x right, y down) axes, which
    displays clockwise on screen. Holes are not traced. An empty mask
    yields an empty list.
    """
    arr = check_binary_mask(mask)
    if not arr.any():
        return []
    h, w = arr.shape
    labels, count = ndimage.label(arr, structure=_LABEL_STRUCTURE)
    stride = w + 2
    contours = []
    for lbl in range(1, count + 1):
        region = labels == lbl
        ys, xs = np.nonzero(region)
        start = (int(xs[0]), int(ys[0]))  # nonzero is row-major: topmost-leftmost
        padded = np.zeros((h + 2, w + 2), dtype=np.uint8)
        padded[1:-1, 1:-1] = region
        buf = padded.tobytes()

        def is_fg(q, _buf=buf, _stride=stride):
            return _buf[(q[1] + 1) * _stride + q[0] + 1] != 0

        pts = _moore_trace(is_fg, start)
        contours.append(np.array(pts, dtype=np.int64))
    return contours


def largest_contour(contours: list[np.ndarray]) -> np.ndarray:
    """Pick the contour with the largest polygon area (ties: earliest)."""
    if not contours:
        raise NoContourError("no contours to choose from")
    return max(contours, key=contour_area)


def _signed_area_2x(pts: np.ndarray) -> float:
    """Twice the signed shoelace area of the closed polygon ``pts``."""
    x = pts[:, 0].astype(np.float64)
    y = pts[:, 1].astype(np.float64)
    return float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def contour_area(c) -> float:
    """Absolute shoelace area of the contour polygon (0 for < 3 points)."""
    pts = check_contour(c)
    if len(pts) < 3:
        return 0.0
    return abs(_signed_area_2x(pts)) * 0.5


def contour_perimeter(c) -> float:
    """Sum of Euclidean edge lengths including the closing edge."""
    pts = check_contour(c)
    if len(pts) < 2:
        return 0.0
    diff = np.roll(pts, -1, axis=0) - pts
    return float(np.hypot(diff[:, 0], diff[:, 1]).sum())


def moments(c) -> Moments:
    """Raw and central moments of the filled contour polygon.

    Uses Green's-theorem accumulation over the closed edge list, so
    ``m00`` equals ``contour_area`` exactly. Signs are normalized so
    ``m00`` is positive regardless of traversal direction.
    """
    pts = check_contour(c)
    if len(pts) < 3:
        raise DegenerateContourError("moments need at least 3 points")
    area_2x = _signed_area_2x(pts)
    if area_2x == 0.0:
        raise DegenerateContourError("contour encloses no area")

    x0 = pts[:, 0].astype(np.float64)
    y0 = pts[:, 1].astype(np.float64)
    x1 = np.roll(x0, -1)
    y1 = np.roll(y0, -1)
    cross = x0 * y1 - x1 * y0

    sign = 1.0 if area_2x > 0 else -1.0
    m00 = abs(area_2x) * 0.5
    m10 = sign * float(np.sum(cross * (x0 + x1))) / 6.0
    m01 = sign * float(np.sum(cross * (y0 + y1))) / 6.0
    m20 = sign * float(np.sum(cross * (x0 * x0 + x0 * x1 + x1 * x1))) / 12.0
    m11 = sign * float(np.sum(cross * (x0 * (2 * y0 + y1) + x1 * (y0 + 2 * y1)))) / 24.0
    m02 = sign * float(np.sum(cross * (y0 * y0 + y0 * y1 + y1 * y1))) / 12.0

    cx = m10 / m00
    cy = m01 / m00
    mu20 = max(m20 - m10 * cx, 0.0)
    mu11 = m11 - m10 * cy
    mu02 = max(m02 - m01 * cy, 0.0)
    return Moments(m00=m00, m10=m10, m01=m01, mu20=mu20, mu11=mu11, mu02=mu02)


def orientation(m: Moments) -> float:
    """Principal-axis angle in degrees, mapped into [0, 180).

    Measured from the +x axis toward +y (downward), so 0 means the mass
    is spread horizontally and 90 vertically. Isotropic shapes (both
    second moments equal, no cross term) fall back to 0.
    """
    theta = 0.5 * math.degrees(math.atan2(2.0 * m.mu11, m.mu20 - m.mu02))
    if theta < 0.0:
        theta += 180.0
    if theta >= 180.0:
        theta -= 180.0
    return theta


def features(c, hull_area: float, defect_count: int) -> ContourFeatures:
    """Assemble the descriptor vector for one contour.

    ``hull_area`` must come from the contour's convex hull (>= contour
    area); ``defect_count`` is the significant-defect count the caller
    established. Raises DegenerateContourError when the contour encloses
    no area or its bounding rectangle has zero height.
    """
    pts = check_contour(c)
    area = contour_area(pts)
    if area <= 0.0:
        raise DegenerateContourError("contour encloses no area")
    min_x, min_y = pts.min(axis=0)
    max_x, max_y = pts.max(axis=0)
    w = float(max_x - min_x)
    h = float(max_y - min_y)
    if h == 0.0:
        raise DegenerateContourError("bounding rectangle has zero height")
    m = moments(pts)
    return ContourFeatures(
        area=area,
        perimeter=contour_perimeter(pts),
        solidity=area / hull_area,
        aspect_ratio=w / h,
        orientation_deg=orientation(m),
        equiv_diameter=math.sqrt(4.0 * area / math.pi),
        bounding_rect=(float(min_x), float(min_y), w, h),
        defect_count=int(defect_count),
        centroid=m.centroid,
    )
