"""Fingerspelled-letter recognition from hand silhouettes.

Binary masks are traced to contours; convexity defects between the
contour and its hull count extended fingers, and a tunable rule table
maps defect counts, valley angles, and shape features to letters. A
debouncer turns the frame stream into stable letter events for file
and command hooks, with HTTP and CLI front ends on top.
"""

__version__ = "0.1.0"

from .classify import (
    LETTERS,
    UNKNOWN,
    LetterDecision,
    RuleTable,
    classify,
    count_significant_defects,
    is_letter_A,
    is_letter_B,
    triangle_angle,
)
from .contours import (
    ContourFeatures,
    Moments,
    contour_area,
    contour_perimeter,
    features,
    largest_contour,
    moments,
    orientation,
    trace_contours,
)
from .errors import (
    ConfigError,
    DecodeError,
    DegenerateContourError,
    DegeneratePointsError,
    FingerspellError,
    MalformedHeaderError,
    NoContourError,
    NoPointsError,
    RangeViolationError,
    TruncatedDataError,
    TypeMismatchError,
    UniformImageError,
    UnknownKeyError,
    UnsupportedMaxvalError,
    UnsupportedPngError,
)
from .estimator import CalibrationResult, FingerspellingRecognizer, calibrate_rules
from .hull import Circle, Defect, Hull, convex_hull, convexity_defects, min_enclosing_circle
from .imaging import binarize_fixed, binarize_otsu, denoise
from .io import (
    AppConfig,
    HookConfig,
    HookOutcome,
    ServiceConfig,
    decode_image,
    decode_pgm,
    decode_png_gray,
    dump_config,
    emit_letter,
    encode_pgm,
    encode_png_gray,
    encode_result,
    load_config,
    load_config_file,
    result_document,
)
from .pipeline import (
    Debouncer,
    FrameResult,
    PipelineConfig,
    SessionMetrics,
    SessionTracker,
    StableLetterEvent,
    actual_output,
    process_frame,
)

__all__ = [
    "__version__",
    "LETTERS",
    "UNKNOWN",
    "LetterDecision",
    "RuleTable",
    "classify",
    "count_significant_defects",
    "is_letter_A",
    "is_letter_B",
    "triangle_angle",
    "ContourFeatures",
    "Moments",
    "contour_area",
    "contour_perimeter",
    "features",
    "largest_contour",
    "moments",
    "orientation",
    "trace_contours",
    "FingerspellError",
    "ConfigError",
    "DecodeError",
    "DegenerateContourError",
    "DegeneratePointsError",
    "MalformedHeaderError",
    "NoContourError",
    "NoPointsError",
    "RangeViolationError",
    "TruncatedDataError",
    "TypeMismatchError",
    "UniformImageError",
    "UnknownKeyError",
    "UnsupportedMaxvalError",
    "UnsupportedPngError",
    "CalibrationResult",
    "FingerspellingRecognizer",
    "calibrate_rules",
    "Circle",
    "Defect",
    "Hull",
    "convex_hull",
    "convexity_defects",
    "min_enclosing_circle",
    "binarize_fixed",
    "binarize_otsu",
    "denoise",
    "AppConfig",
    "HookConfig",
    "HookOutcome",
    "ServiceConfig",
    "decode_image",
    "decode_pgm",
    "decode_png_gray",
    "dump_config",
    "emit_letter",
    "encode_pgm",
    "encode_png_gray",
    "encode_result",
    "load_config",
    "load_config_file",
    "result_document",
    "Debouncer",
    "FrameResult",
    "PipelineConfig",
    "SessionMetrics",
    "SessionTracker",
    "StableLetterEvent",
    "actual_output",
    "process_frame",
]
