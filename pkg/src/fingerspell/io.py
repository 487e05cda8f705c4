"""Image decoding, result serialization, letter hooks, and configuration.

The letter hook realizes the recognizer's output contract: in file
mode the stable letter overwrites a single two-byte file (letter plus
newline) atomically; in command mode an external program is spawned
with the letter substituted in, detached so the pipeline never blocks
on audio playback.
"""

from __future__ import annotations

import json
import math
import os
import shlex
import struct
import subprocess
import tempfile
from dataclasses import dataclass
from io import BytesIO

import numpy as np
from PIL import Image

from .classify import RuleTable
from .errors import (
    MalformedHeaderError,
    RangeViolationError,
    TruncatedDataError,
    TypeMismatchError,
    UnknownKeyError,
    UnsupportedMaxvalError,
    UnsupportedPngError,
)
from .pipeline import FrameResult, PipelineConfig, StableLetterEvent
from .validation import check_gray_image

SCHEMA_VERSION = 1

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


# ---------------------------------------------------------------------------
# Image decoding


def decode_pgm(data: bytes) -> np.ndarray:
    """Decode a binary (P5) portable graymap with maxval up to 255."""
    if not data.startswith(b"P5"):
        raise MalformedHeaderError("not a binary PGM (expected P5 magic)")
    tokens, cursor = _pgm_header_tokens(data)
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise MalformedHeaderError(f"non-numeric PGM header fields: {tokens}") from None
    if width <= 0 or height <= 0:
        raise MalformedHeaderError(f"invalid PGM dimensions {width}x{height}")
    if maxval > 255:
        raise UnsupportedMaxvalError(f"PGM maxval {maxval} exceeds 255")
    if maxval <= 0:
        raise MalformedHeaderError(f"invalid PGM maxval {maxval}")
    needed = width * height
    raster = data[cursor : cursor + needed]
    if len(raster) < needed:
        raise TruncatedDataError(
            f"PGM raster has {len(raster)} of {needed} expected bytes"
        )
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()


def _pgm_header_tokens(data: bytes) -> tuple[list[bytes], int]:
    """Read the three header integers after P5, honoring '#' comments.

    Returns the tokens and the raster start offset (one whitespace byte
    past the maxval token).
    """
    tokens: list[bytes] = []
    i = 2
    n = len(data)
    while len(tokens) < 3:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i : i + 1] == b"#":
            while i < n and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        start = i
        while i < n and not data[i : i + 1].isspace():
            i += 1
        if start == i:
            raise TruncatedDataError("PGM header ended before width/height/maxval")
        tokens.append(data[start:i])
    if i >= n:
        raise TruncatedDataError("PGM raster missing after header")
    return tokens, i + 1  # exactly one whitespace byte separates header and raster


def encode_pgm(img) -> bytes:
    """Encode a grayscale image as binary PGM."""
    arr = check_gray_image(img)
    h, w = arr.shape
    return b"P5\n%d %d\n255\n" % (w, h) + arr.tobytes()


def decode_png_gray(data: bytes) -> np.ndarray:
    """Decode an 8-bit non-interlaced PNG to grayscale.

    Color inputs are luma-converted as 0.299 R + 0.587 G + 0.114 B
    rounded half-up; palette images are expanded first and alpha is
    ignored. Interlaced or deeper-than-8-bit files are rejected.
    """
    if not data.startswith(_PNG_SIGNATURE):
        raise MalformedHeaderError("not a PNG (bad signature)")
    if len(data) < 29 or data[12:16] != b"IHDR":
        raise MalformedHeaderError("PNG missing IHDR chunk")
    _w, _h, bit_depth, _color, _comp, _filt, interlace = struct.unpack(
        ">IIBBBBB", data[16:29]
    )
    if bit_depth > 8:
        raise UnsupportedPngError(f"PNG bit depth {bit_depth} unsupported (max 8)")
    if interlace != 0:
        raise UnsupportedPngError("interlaced PNG unsupported")
    try:
        img = Image.open(BytesIO(data))
        img.load()
    except Exception as exc:
        if "truncat" in str(exc).lower():
            raise TruncatedDataError(f"truncated PNG: {exc}") from exc
        raise MalformedHeaderError(f"undecodable PNG: {exc}") from exc

    if img.mode == "L":
        return np.asarray(img, dtype=np.uint8).copy()
    if img.mode == "1":
        return np.asarray(img.convert("L"), dtype=np.uint8).copy()
    if img.mode == "LA":
        return np.asarray(img, dtype=np.uint8)[:, :, 0].copy()
    if img.mode == "P":
        img = img.convert("RGB")
    if img.mode in ("RGB", "RGBA"):
        rgb = np.asarray(img, dtype=np.float64)[:, :, :3]
        luma = 0.299 * rgb[:, :, 0] + 0.587 * rgb[:, :, 1] + 0.114 * rgb[:, :, 2]
        return np.floor(luma + 0.5).astype(np.uint8)
    raise UnsupportedPngError(f"PNG mode {img.mode} unsupported")


def encode_png_gray(img) -> bytes:
    """Encode a grayscale image as an 8-bit PNG."""
    arr = check_gray_image(img)
    buf = BytesIO()
    Image.fromarray(arr, mode="L").save(buf, format="PNG")
    return buf.getvalue()


def decode_image(data: bytes) -> np.ndarray:
    """Decode PGM or PNG bytes by sniffing the magic number."""
    if data.startswith(_PNG_SIGNATURE):
        return decode_png_gray(data)
    if data.startswith(b"P5"):
        return decode_pgm(data)
    raise MalformedHeaderError("unrecognized image format (expected P5 PGM or PNG)")


# ---------------------------------------------------------------------------
# Letter hooks


@dataclass(frozen=True)
class HookConfig:
    """Where stable letters go: a single-letter file, a command, both, or nowhere."""

    mode: str = "none"
    letter_file: str | None = None
    command: str | None = None

    def validate(self) -> None:
        if self.mode not in ("none", "file", "command", "both"):
            raise ValueError(f"hook mode must be none/file/command/both, got {self.mode!r}")
        if self.mode in ("file", "both") and not self.letter_file:
            raise ValueError("hook.letter_file required when file mode is active")
        if self.mode in ("command", "both"):
            if not self.command or self.command.count("{letter}") != 1:
                raise ValueError("hook.command must contain exactly one {letter} placeholder")


@dataclass(frozen=True)
class HookOutcome:
    """Per-channel result of one emission; None means the channel was off."""

    file_ok: bool | None = None
    command_ok: bool | None = None
    file_error: str | None = None
    command_error: str | None = None


_spawned: list[subprocess.Popen] = []


def _reap_spawned() -> None:
    _spawned[:] = [p for p in _spawned if p.poll() is None]


def write_atomic(path: str, data: bytes) -> None:
    """Write data so a concurrent reader sees the old or new file, never a partial."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".letter.")
    try:
        os.write(fd, data)
        os.fsync(fd)
    finally:
        os.close(fd)
    try:
        os.replace(tmp_path, path)
    except OSError:
        os.unlink(tmp_path)
        raise


def emit_letter(event: StableLetterEvent, hook: HookConfig) -> HookOutcome:
    """Deliver a stable letter through the configured channels.

    File mode overwrites the letter file with the letter plus newline.
    Command mode spawns the configured program detached; the pipeline
    never waits on it. Failures are recorded in the outcome, never
    raised, so a broken hook cannot stall recognition.
    """
    file_ok: bool | None = None
    command_ok: bool | None = None
    file_error: str | None = None
    command_error: str | None = None

    if hook.mode in ("file", "both"):
        try:
            write_atomic(hook.letter_file, (event.letter + "\n").encode("ascii"))
            file_ok = True
        except OSError as exc:
            file_ok = False
            file_error = str(exc)

    if hook.mode in ("command", "both"):
        _reap_spawned()
        try:
            argv = shlex.split(hook.command.replace("{letter}", event.letter))
            proc = subprocess.Popen(
                argv,
                stdin=subprocess.DEVNULL,
                stdout=subprocess.DEVNULL,
                stderr=subprocess.DEVNULL,
                start_new_session=True,
            )
            _spawned.append(proc)
            command_ok = True
        except (OSError, ValueError) as exc:
            command_ok = False
            command_error = str(exc)

    return HookOutcome(
        file_ok=file_ok,
        command_ok=command_ok,
        file_error=file_error,
        command_error=command_error,
    )


# ---------------------------------------------------------------------------
# Result serialization


def result_document(result: FrameResult) -> dict:
    """Flatten a FrameResult into the JSON wire document."""
    decision = result.decision
    feats = decision.features
    features_doc = None
    if feats is not None:
        features_doc = {
            "area": feats.area,
            "perimeter": feats.perimeter,
            "solidity": feats.solidity,
            "aspect_ratio": feats.aspect_ratio,
            "orientation_deg": feats.orientation_deg,
            "equiv_diameter": feats.equiv_diameter,
            "bounding_rect": [int(v) for v in feats.bounding_rect],
            "defect_count": int(feats.defect_count),
            "centroid": [float(v) for v in feats.centroid],
        }
    contour_pts = result.contour.tolist()
    defects_doc = [
        {
            "start": result.contour[d.start_idx].tolist(),
            "end": result.contour[d.end_idx].tolist(),
            "far": result.contour[d.far_idx].tolist(),
            "depth": float(d.depth),
        }
        for d in result.defects
    ]
    return {
        "schema_version": SCHEMA_VERSION,
        "letter": decision.letter,
        "rule_id": decision.rule_id,
        "defect_count": int(decision.defect_count),
        "angle_deg": float(decision.angle_deg),
        "features": features_doc,
        "overlay": {
            "contour": contour_pts,
            "hull": result.hull_points.tolist(),
            "defects": defects_doc,
        },
        "timings": {k: float(v) for k, v in result.timings.items()},
    }


def encode_result(doc: dict) -> str:
    """Canonical JSON encoding: sorted keys, compact separators."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def decode_result(text: str) -> dict:
    return json.loads(text)


# ---------------------------------------------------------------------------
# Configuration


@dataclass(frozen=True)
class ServiceConfig:
    cors_origin: str | None = None
    idle_timeout: float = 60.0
    max_body_bytes: int = 4 * 1024 * 1024
    ui_dir: str | None = None

    def validate(self) -> None:
        if self.idle_timeout <= 0:
            raise ValueError(f"idle_timeout must be positive, got {self.idle_timeout}")
        if self.max_body_bytes <= 0:
            raise ValueError(f"max_body_bytes must be positive, got {self.max_body_bytes}")


@dataclass(frozen=True)
class AppConfig:
    pipeline: PipelineConfig = PipelineConfig()
    rules: RuleTable = RuleTable()
    hook: HookConfig = HookConfig()
    service: ServiceConfig = ServiceConfig()


@dataclass(frozen=True)
class _Key:
    section: str
    field: str
    parse: object  # callable(key, raw) -> value
    fmt: object  # callable(value) -> str


def _parse_int_range(lo: int, hi: int):
    def parse(key: str, raw: str) -> int:
        try:
            value = int(raw)
        except ValueError:
            raise TypeMismatchError(f"{key}: expected an integer, got {raw!r}") from None
        if not lo <= value <= hi:
            raise RangeViolationError(f"{key}: {value} outside [{lo}, {hi}]")
        return value

    return parse


def _parse_float_range(lo: float, hi: float, lo_open: bool = False, hi_open: bool = False):
    def parse(key: str, raw: str) -> float:
        try:
            value = float(raw)
        except ValueError:
            raise TypeMismatchError(f"{key}: expected a number, got {raw!r}") from None
        if not math.isfinite(value):
            raise TypeMismatchError(f"{key}: expected a finite number, got {raw!r}")
        low_ok = value > lo if lo_open else value >= lo
        high_ok = value < hi if hi_open else value <= hi
        if not (low_ok and high_ok):
            lo_b = "(" if lo_open else "["
            hi_b = ")" if hi_open else "]"
            raise RangeViolationError(f"{key}: {value} outside {lo_b}{lo}, {hi}{hi_b}")
        return value

    return parse


def _parse_bool(key: str, raw: str) -> bool:
    lowered = raw.lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise TypeMismatchError(f"{key}: expected true/false, got {raw!r}")


def _parse_threshold(key: str, raw: str):
    if raw.lower() == "otsu":
        return None
    return _parse_int_range(0, 255)(key, raw)


def _parse_optional_int(key: str, raw: str):
    if raw.lower() == "none":
        return None
    return _parse_int_range(0, 255)(key, raw)


def _parse_enum(*allowed: str):
    def parse(key: str, raw: str) -> str:
        if raw not in allowed:
            raise TypeMismatchError(f"{key}: expected one of {allowed}, got {raw!r}")
        return raw

    return parse


def _parse_optional_str(key: str, raw: str):
    return None if raw.lower() == "none" else raw


def _fmt_bool(value: bool) -> str:
    return "true" if value else "false"


def _fmt_plain(value) -> str:
    return str(value)


def _fmt_or(token: str):
    return lambda value: token if value is None else str(value)


_ANGLE = _parse_float_range(0.0, 180.0)
_FRACTION_OPEN = _parse_float_range(0.0, 1.0, lo_open=True, hi_open=True)

_CONFIG_KEYS: dict[str, _Key] = {
    "imaging.threshold": _Key("pipeline", "threshold", _parse_threshold, _fmt_or("otsu")),
    "imaging.fallback_threshold": _Key(
        "pipeline", "fallback_threshold", _parse_optional_int, _fmt_or("none")
    ),
    "imaging.invert": _Key("pipeline", "invert", _parse_bool, _fmt_bool),
    "imaging.denoise_passes": _Key(
        "pipeline", "denoise_passes", _parse_int_range(0, 3), _fmt_plain
    ),
    "defects.depth_min": _Key(
        "pipeline", "depth_min", _parse_float_range(0.0, 1e6), _fmt_plain
    ),
    "pipeline.min_area_fraction": _Key(
        "pipeline", "min_area_fraction", _parse_float_range(0.0, 1.0, hi_open=True), _fmt_plain
    ),
    "debounce.window": _Key("pipeline", "window", _parse_int_range(1, 1000), _fmt_plain),
    "classify.v_angle_max": _Key("rules", "v_angle_max", _ANGLE, _fmt_plain),
    "classify.l_angle_min": _Key("rules", "l_angle_min", _ANGLE, _fmt_plain),
    "classify.l_angle_max": _Key("rules", "l_angle_max", _ANGLE, _fmt_plain),
    "classify.c_angle_min": _Key("rules", "c_angle_min", _ANGLE, _fmt_plain),
    "classify.c_angle_max": _Key("rules", "c_angle_max", _ANGLE, _fmt_plain),
    "classify.f_angle_min": _Key("rules", "f_angle_min", _ANGLE, _fmt_plain),
    "classify.i_orient_min": _Key("rules", "i_orient_min", _ANGLE, _fmt_plain),
    "classify.d_orient_max": _Key("rules", "d_orient_max", _ANGLE, _fmt_plain),
    "classify.h_orient_min": _Key("rules", "h_orient_min", _ANGLE, _fmt_plain),
    "classify.h_orient_max": _Key("rules", "h_orient_max", _ANGLE, _fmt_plain),
    "classify.j_orient_max": _Key("rules", "j_orient_max", _ANGLE, _fmt_plain),
    "classify.a_tol": _Key("rules", "a_tol", _FRACTION_OPEN, _fmt_plain),
    "classify.b_fraction": _Key("rules", "b_fraction", _FRACTION_OPEN, _fmt_plain),
    "classify.d_aspect_max": _Key(
        "rules", "d_aspect_max", _parse_float_range(0.0, 100.0, lo_open=True), _fmt_plain
    ),
    "classify.h_aspect_min": _Key(
        "rules", "h_aspect_min", _parse_float_range(0.0, 100.0, lo_open=True), _fmt_plain
    ),
    "classify.u_solidity_min": _Key(
        "rules", "u_solidity_min", _parse_float_range(0.0, 1.0, lo_open=True), _fmt_plain
    ),
    "classify.u_solidity_max": _Key(
        "rules", "u_solidity_max", _parse_float_range(0.0, 1.0, lo_open=True), _fmt_plain
    ),
    "hook.mode": _Key("hook", "mode", _parse_enum("none", "file", "command", "both"), _fmt_plain),
    "hook.letter_file": _Key("hook", "letter_file", _parse_optional_str, _fmt_or("none")),
    "hook.command": _Key("hook", "command", _parse_optional_str, _fmt_or("none")),
    "service.cors_origin": _Key("service", "cors_origin", _parse_optional_str, _fmt_or("none")),
    "service.idle_timeout": _Key(
        "service", "idle_timeout", _parse_float_range(0.0, 86400.0, lo_open=True), _fmt_plain
    ),
    "service.max_body_bytes": _Key(
        "service", "max_body_bytes", _parse_int_range(1, 1 << 30), _fmt_plain
    ),
    "service.ui_dir": _Key("service", "ui_dir", _parse_optional_str, _fmt_or("none")),
}


def _strip_comment(line: str) -> str:
    """Drop a '#' comment when it starts the line or follows whitespace."""
    if line.lstrip().startswith("#"):
        return ""
    for i, ch in enumerate(line):
        if ch == "#" and i > 0 and line[i - 1] in (" ", "\t"):
            return line[:i]
    return line


def load_config(data: bytes | str) -> AppConfig:
    """Parse 'key = value' lines into a validated AppConfig.

    Unknown keys, non-parseable values, and out-of-range values are
    rejected rather than ignored; absent keys take their defaults.
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    overrides: dict[str, dict[str, object]] = {
        "pipeline": {},
        "rules": {},
        "hook": {},
        "service": {},
    }
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw_line).strip()
        if not line:
            continue
        if "=" not in line:
            raise TypeMismatchError(f"line {lineno}: expected 'key = value', got {raw_line!r}")
        key, _, raw_value = line.partition("=")
        key = key.strip()
        raw_value = raw_value.strip()
        entry = _CONFIG_KEYS.get(key)
        if entry is None:
            raise UnknownKeyError(f"line {lineno}: unknown config key {key!r}")
        overrides[entry.section][entry.field] = entry.parse(key, raw_value)

    config = AppConfig(
        pipeline=PipelineConfig(**overrides["pipeline"]),
        rules=RuleTable(**overrides["rules"]),
        hook=HookConfig(**overrides["hook"]),
        service=ServiceConfig(**overrides["service"]),
    )
    try:
        config.pipeline.validate()
        config.rules.validate()
        config.hook.validate()
        config.service.validate()
    except ValueError as exc:
        raise RangeViolationError(str(exc)) from None
    return config


def load_config_file(path: str) -> AppConfig:
    with open(path, "rb") as fh:
        return load_config(fh.read())


def dump_config(config: AppConfig) -> str:
    """Render a full config snapshot, one line per key, registry order."""
    lines = []
    for key, entry in _CONFIG_KEYS.items():
        section = getattr(config, entry.section)
        value = getattr(section, entry.field)
        lines.append(f"{key} = {entry.fmt(value)}")
    return "\n".join(lines) + "\n"
