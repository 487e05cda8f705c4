import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fingerspell.contours import contour_area
from fingerspell.errors import NoPointsError
from fingerspell.hull import (
    convex_hull,
    convexity_defects,
    hull_polygon_area,
    min_enclosing_circle,
)

from .test_contours import star_polygon


def brute_force_hull_vertices(pts: np.ndarray) -> set:
    """Strict hull vertex set: endpoints of edges with all points to one side."""
    n = len(pts)
    vertices = set()
    for i, j in itertools.permutations(range(n), 2):
        a, b = pts[i], pts[j]
        sides = [
            (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
            for k, p in enumerate(pts)
            if k != i and k != j
        ]
        if all(s > 0 for s in sides):
            vertices.add(tuple(a))
            vertices.add(tuple(b))
    return vertices


def brute_force_defects(pts: np.ndarray, hull_indices) -> list:
    """Per hull edge: earliest farthest interior point, plain loops."""
    n = len(pts)
    out = []
    anchors = [int(i) for i in hull_indices]
    for k in range(len(anchors)):
        i = anchors[k]
        j = anchors[(k + 1) % len(anchors)]
        span = (j - i) % n
        interior = [(i + s) % n for s in range(1, span)]
        if not interior:
            continue
        ax, ay = pts[i]
        bx, by = pts[j]
        length = math.hypot(bx - ax, by - ay)
        if length == 0.0:
            continue
        best_idx, best_d = None, 0.0
        for m in interior:
            px, py = pts[m]
            d = abs((bx - ax) * (py - ay) - (by - ay) * (px - ax)) / length
            if d > best_d:
                best_idx, best_d = m, d
        if best_idx is not None:
            out.append((i, j, best_idx, best_d))
    return out


def brute_force_min_circle(pts) -> float:
    """Smallest containing radius over all pair and triple candidate circles."""
    coords = [tuple(map(float, p)) for p in pts]

    def covers(cx, cy, r):
        return all(math.hypot(x - cx, y - cy) <= r + 1e-9 for x, y in coords)

    best = math.inf
    for (ax, ay), (bx, by) in itertools.combinations(coords, 2):
        cx, cy = (ax + bx) / 2.0, (ay + by) / 2.0
        r = math.hypot(ax - cx, ay - cy)
        if r < best and covers(cx, cy, r):
            best = r
    for (ax, ay), (bx, by), (cx_, cy_) in itertools.combinations(coords, 3):
        d = 2.0 * (ax * (by - cy_) + bx * (cy_ - ay) + cx_ * (ay - by))
        if d == 0.0:
            continue
        ux = ((ax**2 + ay**2) * (by - cy_) + (bx**2 + by**2) * (cy_ - ay) + (cx_**2 + cy_**2) * (ay - by)) / d
        uy = ((ax**2 + ay**2) * (cx_ - bx) + (bx**2 + by**2) * (ax - cx_) + (cx_**2 + cy_**2) * (bx - ax)) / d
        r = math.hypot(ax - ux, ay - uy)
        if r < best and covers(ux, uy, r):
            best = r
    if len(coords) == 1 or best is math.inf:
        best = 0.0
    return best


U_NOTCH = np.array(
    [[0, 0], [4, 0], [4, 5], [6, 5], [6, 0], [10, 0], [10, 10], [0, 10]],
    dtype=np.int64,
)

COMB = np.array(
    [
        [1, 2], [2, 8], [4, 8], [5, 0], [6, 8], [8, 8], [9, 0],
        [10, 8], [12, 8], [13, 2], [14, 8], [14, 10], [0, 10], [0, 8],
    ],
    dtype=np.int64,
)


def test_hull_of_square_plus_center_is_the_corners():
    pts = np.array([[0, 0], [10, 0], [5, 5], [10, 10], [0, 10]], dtype=np.int64)
    hull = convex_hull(pts)
    assert sorted(hull.indices.tolist()) == [0, 1, 3, 4]


def test_hull_of_collinear_points_is_the_endpoints():
    pts = np.array([[0, 0], [1, 0], [2, 0]], dtype=np.int64)
    hull = convex_hull(pts)
    assert hull.indices.tolist() == [0, 2]


def test_hull_of_one_and_two_points():
    assert convex_hull(np.array([[3, 4]], dtype=np.int64)).indices.tolist() == [0]
    assert convex_hull(np.array([[0, 0], [2, 3]], dtype=np.int64)).indices.tolist() == [0, 1]


def test_hull_indices_are_strictly_increasing():
    poly = star_polygon(99)
    idx = convex_hull(poly).indices
    assert (np.diff(idx) > 0).all()


@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_hull_matches_the_one_side_brute_force(seed):
    rng = np.random.RandomState(seed)
    pts = rng.uniform(0.0, 100.0, size=(24, 2))
    hull = convex_hull(pts)
    got = {tuple(map(float, pts[i])) for i in hull.indices}
    assert got == brute_force_hull_vertices(pts)


@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_hull_area_dominates_contour_area(seed):
    poly = star_polygon(seed)
    hull = convex_hull(poly)
    assert hull_polygon_area(poly, hull) >= contour_area(poly) - 1e-9


def test_convex_polygon_has_no_defects():
    square = np.array([[0, 0], [9, 0], [9, 9], [0, 9]], dtype=np.int64)
    assert convexity_defects(square, convex_hull(square)) == []


def test_notched_square_has_one_defect_at_the_notch_bottom():
    hull = convex_hull(U_NOTCH)
    (defect,) = convexity_defects(U_NOTCH, hull)
    assert (defect.start_idx, defect.end_idx) == (0, 5)
    assert defect.far_idx == 2  # tie between the two notch corners: earliest wins
    assert defect.depth == pytest.approx(5.0)


def test_comb_has_one_defect_per_gap():
    hull = convex_hull(COMB)
    defects = convexity_defects(COMB, hull)
    assert len(defects) == 3
    fars = [d.far_idx for d in defects]
    assert fars == [2, 4, 7]  # gap floors; flat middle gap resolves to earliest


def test_defect_far_point_lies_strictly_between_its_anchors():
    hull = convex_hull(COMB)
    n = len(COMB)
    for d in convexity_defects(COMB, hull):
        span = (d.end_idx - d.start_idx) % n
        assert 0 < (d.far_idx - d.start_idx) % n < span


@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_defects_match_the_exhaustive_oracle(seed):
    poly = star_polygon(seed)
    hull = convex_hull(poly)
    got = [
        (d.start_idx, d.end_idx, d.far_idx, d.depth)
        for d in convexity_defects(poly, hull)
    ]
    expected = brute_force_defects(poly, hull.indices)
    assert len(got) == len(expected)
    for g, e in zip(got, expected):
        assert g[:3] == e[:3]
        assert g[3] == pytest.approx(e[3], abs=1e-9)


@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_defect_cavities_fit_in_the_hull_minus_shape_region(seed):
    # Each cavity (region between a hull chord and its contour arc) is a
    # disjoint subset of hull-minus-shape, so their areas can never sum
    # past that budget.
    poly = star_polygon(seed)
    n = len(poly)
    hull = convex_hull(poly)
    slack_budget = hull_polygon_area(poly, hull) - contour_area(poly)
    total = 0.0
    for d in convexity_defects(poly, hull):
        span = (d.end_idx - d.start_idx) % n
        arc = poly[[(d.start_idx + s) % n for s in range(span + 1)]].astype(float)
        x, y = arc[:, 0], arc[:, 1]
        total += abs(float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))) * 0.5
    assert total <= slack_budget * 1.05 + 1e-9


def test_min_circle_of_two_points_is_their_diameter():
    circle = min_enclosing_circle([(0.0, 0.0), (6.0, 0.0)])
    assert circle.center == pytest.approx((3.0, 0.0))
    assert circle.radius == pytest.approx(3.0)


def test_min_circle_of_equilateral_triangle_is_its_circumcircle():
    s = 10.0
    pts = [(0.0, 0.0), (s, 0.0), (s / 2.0, s * math.sqrt(3.0) / 2.0)]
    circle = min_enclosing_circle(pts)
    assert circle.radius == pytest.approx(s / math.sqrt(3.0), abs=1e-9)


def test_min_circle_of_single_point_has_zero_radius():
    circle = min_enclosing_circle([(5.0, 7.0)])
    assert circle.center == (5.0, 7.0)
    assert circle.radius == 0.0


def test_min_circle_rejects_empty_input():
    with pytest.raises(NoPointsError):
        min_enclosing_circle([])


@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_min_circle_matches_the_pair_triple_oracle(seed):
    rng = np.random.RandomState(seed)
    pts = rng.uniform(-50.0, 50.0, size=(14, 2))
    circle = min_enclosing_circle(pts)
    assert circle.radius == pytest.approx(brute_force_min_circle(pts), abs=1e-6)


@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_min_circle_contains_every_point(seed):
    rng = np.random.RandomState(seed)
    pts = rng.uniform(-50.0, 50.0, size=(20, 2))
    circle = min_enclosing_circle(pts)
    for x, y in pts:
        assert math.hypot(x - circle.center[0], y - circle.center[1]) <= circle.radius + 1e-6


def test_min_circle_is_permutation_invariant():
    rng = np.random.RandomState(3)
    pts = rng.uniform(0.0, 30.0, size=(15, 2))
    base = min_enclosing_circle(pts)
    for _ in range(5):
        rng.shuffle(pts)
        again = min_enclosing_circle(pts)
        assert again.radius == pytest.approx(base.radius, abs=1e-9)
        assert again.center == pytest.approx(base.center, abs=1e-9)
