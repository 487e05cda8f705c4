"""Letter decision rules.

Three layers: the cosine-rule angle at a defect's far point, the
significant-defect counter, and the fixed-order decision table that
maps (defect count, angle, shape features) to a letter. Every branch
is threshold-driven through :class:`RuleTable` so the calibrator can
retune without touching code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields

from .contours import ContourFeatures, contour_area
from .errors import DegeneratePointsError
from .hull import Circle, Defect
from .validation import check_contour

LETTERS = ("A", "B", "C", "D", "F", "H", "I", "J", "L", "U", "V", "W", "Y")
UNKNOWN = "unknown"

RIGHT_ANGLE_DEG = 90.0


@dataclass(frozen=True)
class RuleTable:
    """Decision thresholds, all config-overridable.

    Angle bounds for V/L/C/F are published ranges; the rest (aspect,
    solidity, circle and area tolerances) are calibration values tuned
    against the synthetic corpus, not constants of the method.
    """

    v_angle_max: float = 10.0
    l_angle_min: float = 20.0
    l_angle_max: float = 35.0
    c_angle_min: float = 40.0
    c_angle_max: float = 66.0
    f_angle_min: float = 100.0
    i_orient_min: float = 169.0
    d_orient_max: float = 20.0
    h_orient_min: float = 30.0
    h_orient_max: float = 100.0
    j_orient_max: float = 168.0
    a_tol: float = 0.15
    b_fraction: float = 0.35
    d_aspect_max: float = 0.8
    h_aspect_min: float = 1.2
    u_solidity_min: float = 0.85
    u_solidity_max: float = 0.95

    def validate(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ValueError(f"{f.name} must be a number, got {value!r}")
            if not math.isfinite(value):
                raise ValueError(f"{f.name} must be finite, got {value!r}")
        angle_fields = (
            "v_angle_max", "l_angle_min", "l_angle_max", "c_angle_min",
            "c_angle_max", "f_angle_min", "i_orient_min", "d_orient_max",
            "h_orient_min", "h_orient_max", "j_orient_max",
        )
        for name in angle_fields:
            value = getattr(self, name)
            if not 0.0 <= value <= 180.0:
                raise ValueError(f"{name} must be within [0, 180], got {value}")
        for lo, hi in (
            ("l_angle_min", "l_angle_max"),
            ("c_angle_min", "c_angle_max"),
            ("h_orient_min", "h_orient_max"),
            ("u_solidity_min", "u_solidity_max"),
        ):
            if getattr(self, lo) > getattr(self, hi):
                raise ValueError(f"{lo} must not exceed {hi}")
        for name in ("a_tol", "b_fraction"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must be within (0, 1), got {value}")
        for name in ("u_solidity_min", "u_solidity_max"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise ValueError(f"{name} must be within (0, 1], got {value}")
        for name in ("d_aspect_max", "h_aspect_min"):
            value = getattr(self, name)
            if value <= 0.0:
                raise ValueError(f"{name} must be positive, got {value}")


@dataclass(frozen=True)
class LetterDecision:
    """Outcome of one frame's classification."""

    letter: str
    defect_count: int
    rule_id: str
    angle_deg: float
    features: ContourFeatures | None


def triangle_angle(start, end, far) -> float:
    """Angle in degrees at ``far`` of the triangle (start, end, far).

    Cosine rule with a = |end - start|, b = |far - start|,
    c = |end - far|: A = arccos((b² + c² − a²) / (2bc)).
    """
    sx, sy = float(start[0]), float(start[1])
    ex, ey = float(end[0]), float(end[1])
    fx, fy = float(far[0]), float(far[1])
    a = math.hypot(ex - sx, ey - sy)
    b = math.hypot(fx - sx, fy - sy)
    c = math.hypot(ex - fx, ey - fy)
    if a == 0.0 or b == 0.0 or c == 0.0:
        raise DegeneratePointsError("triangle points must be pairwise distinct")
    denom = 2.0 * b * c
    if denom == 0.0:  # sides so small their product underflows
        raise DegeneratePointsError("triangle sides vanish at double precision")
    cos_a = (b * b + c * c - a * a) / denom
    cos_a = min(1.0, max(-1.0, cos_a))
    return math.degrees(math.acos(cos_a))


def count_significant_defects(
    defects: list[Defect], c, depth_min: float
) -> tuple[int, float]:
    """Count deep acute defects and report the decision angle.

    A defect counts when its depth reaches ``depth_min`` and its
    triangle angle is at most 90°. The returned angle is the widest
    triangle angle among the deep defects regardless of acuteness: the
    two-defect split must see obtuse valleys that the counter itself
    ignores. Returns (0, 0.0) when nothing is deep enough.
    """
    pts = check_contour(c)
    count = 0
    max_angle = 0.0
    for d in defects:
        if d.depth < depth_min:
            continue
        angle = triangle_angle(pts[d.start_idx], pts[d.end_idx], pts[d.far_idx])
        if angle > max_angle:
            max_angle = angle
        if angle <= RIGHT_ANGLE_DEG:
            count += 1
    return count, max_angle


def is_letter_A(c, circle: Circle, tol: float) -> bool:
    """Fist test: the contour nearly fills its minimum enclosing circle."""
    area = contour_area(c)
    circle_area = math.pi * circle.radius * circle.radius
    if circle_area <= 0.0:
        return False
    return (circle_area - area) / circle_area <= tol


def is_letter_B(features: ContourFeatures, frame_area: float, min_fraction: float) -> bool:
    """Open-palm test: largest area of any pose, and no finger valleys."""
    if frame_area <= 0.0:
        raise ValueError(f"frame_area must be positive, got {frame_area}")
    return features.area / frame_area >= min_fraction and features.defect_count == 0


def classify(
    features: ContourFeatures,
    defect_count: int,
    angle_deg: float,
    a_match: bool,
    b_match: bool,
    rules: RuleTable,
) -> LetterDecision:
    """Fixed-order decision procedure over the rule table.

    One defect: the defect angle picks V, L, C, or Y, with unknown in
    the gaps. Two defects: F when the angle is wide, else W. Zero
    defects: A (circle fill) and B (area fraction) first, then the
    orientation/solidity cascade I, D, H, U, J. Three or more: unknown.
    Total: every input yields exactly one letter or unknown.
    """
    letter, rule_id = _decide(features, defect_count, angle_deg, a_match, b_match, rules)
    return LetterDecision(
        letter=letter,
        defect_count=defect_count,
        rule_id=rule_id,
        angle_deg=angle_deg,
        features=features,
    )


def _decide(features, defect_count, angle_deg, a_match, b_match, rules):
    if defect_count == 1:
        if angle_deg < rules.v_angle_max:
            return "V", "1d.angle.V"
        if rules.l_angle_min <= angle_deg <= rules.l_angle_max:
            return "L", "1d.angle.L"
        if rules.c_angle_min <= angle_deg <= rules.c_angle_max:
            return "C", "1d.angle.C"
        if angle_deg > rules.c_angle_max:
            return "Y", "1d.angle.Y"
        return UNKNOWN, "1d.gap"
    if defect_count == 2:
        if angle_deg > rules.f_angle_min:
            return "F", "2d.angle.F"
        return "W", "2d.angle.W"
    if defect_count == 0:
        if a_match:
            return "A", "0d.circle.A"
        if b_match:
            return "B", "0d.area.B"
        orient = features.orientation_deg
        if rules.i_orient_min <= orient < 180.0:
            return "I", "0d.orient.I"
        if orient < rules.d_orient_max and features.aspect_ratio < rules.d_aspect_max:
            return "D", "0d.orient.D"
        if rules.h_orient_min <= orient <= rules.h_orient_max and features.aspect_ratio > rules.h_aspect_min:
            return "H", "0d.orient.H"
        if rules.u_solidity_min <= features.solidity <= rules.u_solidity_max:
            return "U", "0d.solidity.U"
        if orient < rules.j_orient_max:
            return "J", "0d.orient.J"
        return UNKNOWN, "0d.none"
    return UNKNOWN, "nd.none"
