"""Scikit-learn style front end and the rule-table calibration search.

`FingerspellingRecognizer` wraps the frame pipeline as an estimator:
`predict` works out of the box with the published thresholds, `fit`
grid-searches the calibration fields against labeled frames, and
`transform` exposes the per-frame shape features for downstream use.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin

from .classify import RIGHT_ANGLE_DEG, UNKNOWN, RuleTable, classify, triangle_angle
from .contours import (
    ContourFeatures,
    contour_area,
    features as contour_features,
    trace_contours,
)
from .errors import UniformImageError
from .hull import convex_hull, convexity_defects, hull_polygon_area, min_enclosing_circle
from .imaging import binarize_fixed, binarize_otsu, denoise
from .pipeline import REFERENCE_FRAME_HEIGHT, PipelineConfig
from .validation import check_point_batch

DEFAULT_GRID = {
    "depth_min": (6.0, 8.0, 10.0, 12.0, 14.0),
    "a_tol": (0.10, 0.15, 0.20),
    "b_fraction": (0.30, 0.35, 0.40),
    "d_aspect_max": (0.7, 0.8, 0.9),
    "h_aspect_min": (1.1, 1.2, 1.3),
    "u_band": ((0.85, 0.95), (0.84, 0.96), (0.86, 0.94)),
}


@dataclass(frozen=True)
class CalibrationResult:
    rules: RuleTable
    pipeline: PipelineConfig
    accuracy: float


@dataclass
class _FrameGeometry:
    """Everything the rule sweep needs, computed once per frame."""

    valid: bool
    height: int = 0
    defect_pairs: tuple[tuple[float, float], ...] = ()  # (depth px, angle deg)
    feats: ContourFeatures | None = None
    fill_deficit: float = 1.0
    area_fraction: float = 0.0


def _frame_geometry(img: np.ndarray, config: PipelineConfig) -> _FrameGeometry:
    h, w = img.shape
    if config.threshold is not None:
        mask = binarize_fixed(img, int(config.threshold))
    else:
        try:
            mask, _ = binarize_otsu(img)
        except UniformImageError:
            if config.fallback_threshold is None:
                raise
            mask = binarize_fixed(img, int(config.fallback_threshold))
    if config.invert:
        mask = ~mask
    for _ in range(config.denoise_passes):
        mask = denoise(mask)

    min_area = config.min_area_fraction * h * w
    best = None
    best_area = min_area
    for c in trace_contours(mask):
        area = contour_area(c)
        if area >= best_area:
            best = c
            best_area = area
    if best is None:
        return _FrameGeometry(valid=False, height=h)

    hull = convex_hull(best)
    hull_area = hull_polygon_area(best, hull)
    pairs = tuple(
        (
            d.depth,
            triangle_angle(best[d.start_idx], best[d.end_idx], best[d.far_idx]),
        )
        for d in convexity_defects(best, hull)
    )
    feats = contour_features(best, hull_area, 0)
    circle = min_enclosing_circle(best)
    circle_area = math.pi * circle.radius * circle.radius
    deficit = (circle_area - feats.area) / circle_area if circle_area > 0 else 1.0
    return _FrameGeometry(
        valid=True,
        height=h,
        defect_pairs=pairs,
        feats=feats,
        fill_deficit=deficit,
        area_fraction=feats.area / float(h * w),
    )


def _decide_from_geometry(geom: _FrameGeometry, depth_min: float, rules: RuleTable) -> str:
    if not geom.valid:
        return UNKNOWN
    effective = depth_min * (geom.height / REFERENCE_FRAME_HEIGHT)
    count = 0
    angle_ctx = 0.0
    for depth, angle in geom.defect_pairs:
        if depth < effective:
            continue
        if angle > angle_ctx:
            angle_ctx = angle
        if angle <= RIGHT_ANGLE_DEG:
            count += 1
    feats = replace(geom.feats, defect_count=count)
    a_match = geom.fill_deficit <= rules.a_tol
    b_match = geom.area_fraction >= rules.b_fraction and count == 0
    return classify(feats, count, angle_ctx, a_match, b_match, rules).letter


def calibrate_rules(
    frames,
    labels,
    base_rules: RuleTable | None = None,
    base_pipeline: PipelineConfig | None = None,
    grid: dict | None = None,
) -> CalibrationResult:
    """Exhaustive grid search over the calibration fields.

    Maximizes exact-match accuracy on the labeled frames; ties break
    toward the strictest gates (smallest a_tol, largest b_fraction,
    largest depth_min, tightest aspect and solidity bands), i.e. the
    widest abstention margins around the known letters.
    """
    rules = base_rules if base_rules is not None else RuleTable()
    pipeline = base_pipeline if base_pipeline is not None else PipelineConfig()
    search = dict(DEFAULT_GRID)
    if grid:
        search.update(grid)
    imgs = check_point_batch(frames)
    expected = [str(l) for l in labels]
    if len(imgs) != len(expected):
        raise ValueError(f"{len(imgs)} frames but {len(expected)} labels")
    if not imgs:
        raise ValueError("calibration needs at least one labeled frame")

    geoms = [_frame_geometry(img, pipeline) for img in imgs]

    best_key = None
    best_combo = None
    for depth_min, a_tol, b_fraction, d_aspect_max, h_aspect_min, u_band in itertools.product(
        search["depth_min"],
        search["a_tol"],
        search["b_fraction"],
        search["d_aspect_max"],
        search["h_aspect_min"],
        search["u_band"],
    ):
        candidate = replace(
            rules,
            a_tol=a_tol,
            b_fraction=b_fraction,
            d_aspect_max=d_aspect_max,
            h_aspect_min=h_aspect_min,
            u_solidity_min=u_band[0],
            u_solidity_max=u_band[1],
        )
        hits = sum(
            _decide_from_geometry(g, depth_min, candidate) == want
            for g, want in zip(geoms, expected)
        )
        accuracy = hits / len(geoms)
        key = (
            accuracy,
            -a_tol,
            b_fraction,
            depth_min,
            -d_aspect_max,
            h_aspect_min,
            -(u_band[1] - u_band[0]),
        )
        if best_key is None or key > best_key:
            best_key = key
            best_combo = (candidate, depth_min, accuracy)

    candidate, depth_min, accuracy = best_combo
    return CalibrationResult(
        rules=candidate,
        pipeline=replace(pipeline, depth_min=depth_min),
        accuracy=accuracy,
    )


class FingerspellingRecognizer(BaseEstimator, ClassifierMixin, TransformerMixin):
    """Rule-table letter classifier over grayscale frames.

    Works unfitted with the published thresholds; `fit` retunes the
    calibration fields on labeled frames. X is a sequence of 2-D uint8
    frames (or one 3-D stack); y is the expected letter per frame.
    """

    def __init__(
        self,
        threshold: int | None = None,
        fallback_threshold: int | None = 128,
        invert: bool = False,
        denoise_passes: int = 1,
        depth_min: float = 10.0,
        min_area_fraction: float = 0.01,
        rules: RuleTable | None = None,
    ):
        self.threshold = threshold
        self.fallback_threshold = fallback_threshold
        self.invert = invert
        self.denoise_passes = denoise_passes
        self.depth_min = depth_min
        self.min_area_fraction = min_area_fraction
        self.rules = rules

    def _pipeline_config(self) -> PipelineConfig:
        if hasattr(self, "pipeline_config_"):
            return self.pipeline_config_
        config = PipelineConfig(
            threshold=self.threshold,
            fallback_threshold=self.fallback_threshold,
            invert=self.invert,
            denoise_passes=self.denoise_passes,
            depth_min=self.depth_min,
            min_area_fraction=self.min_area_fraction,
        )
        config.validate()
        return config

    def _rule_table(self) -> RuleTable:
        if hasattr(self, "rules_"):
            return self.rules_
        rules = self.rules if self.rules is not None else RuleTable()
        rules.validate()
        return rules

    def fit(self, X, y):
        result = calibrate_rules(
            X,
            y,
            base_rules=self.rules if self.rules is not None else RuleTable(),
            base_pipeline=PipelineConfig(
                threshold=self.threshold,
                fallback_threshold=self.fallback_threshold,
                invert=self.invert,
                denoise_passes=self.denoise_passes,
                depth_min=self.depth_min,
                min_area_fraction=self.min_area_fraction,
            ),
        )
        self.rules_ = result.rules
        self.pipeline_config_ = result.pipeline
        self.accuracy_ = result.accuracy
        self.classes_ = np.unique(np.asarray(y, dtype=object))
        return self

    def predict(self, X):
        config = self._pipeline_config()
        rules = self._rule_table()
        letters = [
            _decide_from_geometry(_frame_geometry(img, config), config.depth_min, rules)
            for img in check_point_batch(X)
        ]
        return np.asarray(letters, dtype=object)

    def transform(self, X):
        """Per-frame shape features as a float matrix.

        Columns: defect_count, decision angle, area, perimeter,
        solidity, aspect_ratio, orientation_deg, equiv_diameter.
        Frames with no usable contour yield all-zero rows.
        """
        config = self._pipeline_config()
        rows = []
        for img in check_point_batch(X):
            geom = _frame_geometry(img, config)
            if not geom.valid:
                rows.append([0.0] * 8)
                continue
            effective = config.depth_min * (geom.height / REFERENCE_FRAME_HEIGHT)
            count = 0
            angle_ctx = 0.0
            for depth, angle in geom.defect_pairs:
                if depth < effective:
                    continue
                if angle > angle_ctx:
                    angle_ctx = angle
                if angle <= RIGHT_ANGLE_DEG:
                    count += 1
            f = geom.feats
            rows.append(
                [
                    float(count),
                    angle_ctx,
                    f.area,
                    f.perimeter,
                    f.solidity,
                    f.aspect_ratio,
                    f.orientation_deg,
                    f.equiv_diameter,
                ]
            )
        return np.asarray(rows, dtype=np.float64)

    def fit_transform(self, X, y=None, **fit_params):
        if y is None:
            return self.transform(X)
        return self.fit(X, y, **fit_params).transform(X)
