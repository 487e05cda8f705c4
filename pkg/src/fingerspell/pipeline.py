"""Frame-to-letter orchestration, debouncing, and the timing metric.

`process_frame` chains the imaging, contour, hull, and rule stages for
one grayscale frame and reports per-stage timings. `Debouncer` turns
the per-frame letter stream into stable events, and `SessionTracker`
accumulates the session metrics the service and batch runner report.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass

import numpy as np

from .classify import (
    UNKNOWN,
    LetterDecision,
    RuleTable,
    classify,
    count_significant_defects,
    is_letter_A,
    is_letter_B,
)
from .contours import contour_area, features as contour_features, trace_contours
from .errors import UniformImageError
from .hull import Defect, convex_hull, convexity_defects, hull_polygon_area, min_enclosing_circle
from .imaging import binarize_fixed, binarize_otsu, denoise
from .validation import check_gray_image

REFERENCE_FRAME_HEIGHT = 480.0
STANDARD_SECONDS = 7.0

STAGES = ("binarize", "denoise", "trace", "hull", "defects", "features", "classify")

_EMPTY_POINTS = np.empty((0, 2), dtype=np.int64)


@dataclass(frozen=True)
class PipelineConfig:
    """Per-frame processing knobs (the rule thresholds live in RuleTable)."""

    threshold: int | None = None  # fixed binarization level; None selects Otsu
    fallback_threshold: int | None = 128  # used when Otsu sees no contrast; None propagates the error
    invert: bool = False
    denoise_passes: int = 1
    depth_min: float = 10.0  # px at the 480-px reference frame height, scaled to the input
    window: int = 5
    min_area_fraction: float = 0.01

    def validate(self) -> None:
        for name in ("threshold", "fallback_threshold"):
            value = getattr(self, name)
            if value is not None and not 0 <= int(value) <= 255:
                raise ValueError(f"{name} must be within [0, 255], got {value}")
        if not 0 <= self.denoise_passes <= 3:
            raise ValueError(f"denoise_passes must be within [0, 3], got {self.denoise_passes}")
        if self.depth_min < 0:
            raise ValueError(f"depth_min must be non-negative, got {self.depth_min}")
        if self.window < 1:
            raise ValueError(f"window must be at least 1, got {self.window}")
        if not 0.0 <= self.min_area_fraction < 1.0:
            raise ValueError(
                f"min_area_fraction must be within [0, 1), got {self.min_area_fraction}"
            )


@dataclass(frozen=True)
class FrameResult:
    """One frame's decision plus the overlay geometry and stage timings."""

    decision: LetterDecision
    contour: np.ndarray
    hull_points: np.ndarray
    defects: list[Defect]
    timings: dict[str, float]


@dataclass(frozen=True)
class StableLetterEvent:
    letter: str


@dataclass
class SessionMetrics:
    frames_processed: int = 0
    recognitions_emitted: int = 0
    elapsed_to_first_emit: float | None = None
    a_o: float | None = None


def actual_output(elapsed: float) -> float:
    """Recognition-time score: elapsed seconds over the 7 s standard, as percent."""
    if elapsed < 0:
        raise ValueError(f"elapsed must be non-negative, got {elapsed}")
    return elapsed / STANDARD_SECONDS * 100.0


def process_frame(img, rules: RuleTable, config: PipelineConfig) -> FrameResult:
    """Run one grayscale frame through the full recognition chain.

    Stages run in fixed order: binarize, denoise, trace, hull, defects,
    features, classify. Each stage's elapsed time is recorded in
    microseconds; stages skipped because no contour passed the area
    gate report 0.0 so the timing keys are always complete. Identical
    frame and config give an identical result apart from timings.
    """
    arr = check_gray_image(img)
    h, w = arr.shape
    timings: dict[str, float] = {}

    t0 = time.perf_counter_ns()
    if config.threshold is not None:
        mask = binarize_fixed(arr, int(config.threshold))
    else:
        try:
            mask, _ = binarize_otsu(arr)
        except UniformImageError:
            if config.fallback_threshold is None:
                raise
            mask = binarize_fixed(arr, int(config.fallback_threshold))
    if config.invert:
        mask = ~mask
    timings["binarize"] = (time.perf_counter_ns() - t0) / 1e3

    t0 = time.perf_counter_ns()
    for _ in range(config.denoise_passes):
        mask = denoise(mask)
    timings["denoise"] = (time.perf_counter_ns() - t0) / 1e3

    t0 = time.perf_counter_ns()
    contours = trace_contours(mask)
    min_area = config.min_area_fraction * h * w
    best = None
    best_area = min_area
    for c in contours:
        area = contour_area(c)
        if area >= best_area:
            best = c
            best_area = area
    timings["trace"] = (time.perf_counter_ns() - t0) / 1e3

    if best is None:
        for stage in ("hull", "defects", "features", "classify"):
            timings[stage] = 0.0
        decision = LetterDecision(
            letter=UNKNOWN, defect_count=0, rule_id="no.contour", angle_deg=0.0, features=None
        )
        return FrameResult(
            decision=decision,
            contour=_EMPTY_POINTS,
            hull_points=_EMPTY_POINTS,
            defects=[],
            timings=timings,
        )

    t0 = time.perf_counter_ns()
    hull = convex_hull(best)
    hull_area = hull_polygon_area(best, hull)
    timings["hull"] = (time.perf_counter_ns() - t0) / 1e3

    t0 = time.perf_counter_ns()
    defects = convexity_defects(best, hull)
    effective_depth = config.depth_min * (h / REFERENCE_FRAME_HEIGHT)
    defect_count, angle_deg = count_significant_defects(defects, best, effective_depth)
    timings["defects"] = (time.perf_counter_ns() - t0) / 1e3

    t0 = time.perf_counter_ns()
    feats = contour_features(best, hull_area, defect_count)
    timings["features"] = (time.perf_counter_ns() - t0) / 1e3

    t0 = time.perf_counter_ns()
    circle = min_enclosing_circle(best)
    a_match = is_letter_A(best, circle, rules.a_tol)
    b_match = is_letter_B(feats, float(h * w), rules.b_fraction)
    decision = classify(feats, defect_count, angle_deg, a_match, b_match, rules)
    timings["classify"] = (time.perf_counter_ns() - t0) / 1e3

    deep = [d for d in defects if d.depth >= effective_depth]
    return FrameResult(
        decision=decision,
        contour=best,
        hull_points=best[hull.indices],
        defects=deep,
        timings=timings,
    )


class Debouncer:
    """K-frame agreement filter over the per-frame letter stream.

    Emits a stable event only when the last `window` letters agree on a
    single known letter that differs from the previous emission, so a
    held pose fires once and noise never fires.
    """

    def __init__(self, window: int = 5):
        if window < 1:
            raise ValueError(f"window must be at least 1, got {window}")
        self.window = window
        self._ring: deque[str] = deque(maxlen=window)
        self.last_emitted: str | None = None

    def push(self, letter: str) -> StableLetterEvent | None:
        self._ring.append(letter)
        if len(self._ring) < self.window:
            return None
        first = self._ring[0]
        if first == UNKNOWN or first == self.last_emitted:
            return None
        if any(x != first for x in self._ring):
            return None
        self.last_emitted = first
        return StableLetterEvent(letter=first)


class SessionTracker:
    """Single-writer session state: debounce plus timing metrics.

    Timestamps come from the caller (wall clock in the service,
    synthetic frame times in batch runs) so metrics are reproducible.
    The score uses the elapsed time from session start to the first
    stable emission.
    """

    def __init__(self, window: int = 5, start_time: float = 0.0):
        self.debouncer = Debouncer(window)
        self.start_time = start_time
        self.metrics = SessionMetrics()

    def observe(self, letter: str, timestamp: float) -> StableLetterEvent | None:
        self.metrics.frames_processed += 1
        event = self.debouncer.push(letter)
        if event is not None:
            self.metrics.recognitions_emitted += 1
            if self.metrics.elapsed_to_first_emit is None:
                elapsed = timestamp - self.start_time
                self.metrics.elapsed_to_first_emit = elapsed
                self.metrics.a_o = actual_output(elapsed)
        return event
