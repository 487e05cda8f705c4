"""Command-line entry points: recognize, batch, serve, calibrate.

Exit codes: 0 for any completed decision (including unknown), 2 for
unreadable or undecodable inputs (and busy ports), 3 for bad flags.
Stdout carries the same JSON documents as the HTTP wire so shell
pipelines and the service are interchangeable.
"""

from __future__ import annotations

import argparse
import socket
import sys
from dataclasses import replace
from pathlib import Path

from .classify import LETTERS, UNKNOWN
from .errors import ConfigError, DecodeError
from .estimator import calibrate_rules
from .io import (
    AppConfig,
    decode_image,
    dump_config,
    emit_letter,
    load_config_file,
    result_document,
)
from .pipeline import SessionTracker, process_frame


class _Parser(argparse.ArgumentParser):
    """argparse with the documented exit code for flag errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(3, f"{self.prog}: error: {message}\n")


def _threshold_value(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {raw!r}") from None
    if not 0 <= value <= 255:
        raise argparse.ArgumentTypeError(f"threshold {value} outside [0, 255]")
    return value


def _positive_float(raw: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {raw!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {value}")
    return value


def _positive_int(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {raw!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _port_value(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {raw!r}") from None
    if not 0 <= value <= 65535:
        raise argparse.ArgumentTypeError(f"port {value} outside [0, 65535]")
    return value


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH", help="config file (key = value lines)")
    group = parser.add_mutually_exclusive_group()
    group.add_argument(
        "--threshold", type=_threshold_value, metavar="N", help="fixed binarization level 0-255"
    )
    group.add_argument(
        "--otsu", action="store_true", help="automatic threshold selection (default)"
    )
    parser.add_argument("--invert", action="store_true", help="swap foreground and background")
    parser.add_argument(
        "--window", type=_positive_int, metavar="K", help="debounce window length"
    )
    parser.add_argument("--hook-file", metavar="PATH", help="write stable letters to this file")
    parser.add_argument(
        "--hook-cmd", metavar="TEMPLATE", help="spawn this command per stable letter ({letter})"
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="fingerspell", description="Fingerspelled-letter recognition")
    sub = parser.add_subparsers(dest="command", required=True)

    p_rec = sub.add_parser("recognize", help="classify a single image file")
    p_rec.add_argument("path", help="PGM or PNG image")
    p_rec.add_argument("--brief", action="store_true", help="print only the letter")
    _add_common_flags(p_rec)

    p_batch = sub.add_parser("batch", help="run a directory of frames as one session")
    p_batch.add_argument("directory", help="directory of frames, processed in sorted order")
    p_batch.add_argument(
        "--expected", metavar="FILE", help="one expected letter per frame; prints accuracy"
    )
    p_batch.add_argument(
        "--fps", type=_positive_float, default=10.0, help="frame timestamps = index / fps"
    )
    _add_common_flags(p_batch)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument(
        "--port", type=_port_value, default=8000, help="0 binds a free port and prints it"
    )
    _add_common_flags(p_serve)

    p_cal = sub.add_parser("calibrate", help="tune rule thresholds on labeled fixtures")
    p_cal.add_argument("directory", help="images named <letter>_*.pgm / <letter>_*.png")
    p_cal.add_argument("--out", metavar="PATH", help="write the tuned config here (default stdout)")
    _add_common_flags(p_cal)

    return parser


def _build_config(args) -> AppConfig:
    if getattr(args, "config", None):
        config = load_config_file(args.config)
    else:
        config = AppConfig()
    pipeline = config.pipeline
    if getattr(args, "threshold", None) is not None:
        pipeline = replace(pipeline, threshold=args.threshold)
    elif getattr(args, "otsu", False):
        pipeline = replace(pipeline, threshold=None)
    if getattr(args, "invert", False):
        pipeline = replace(pipeline, invert=True)
    if getattr(args, "window", None) is not None:
        pipeline = replace(pipeline, window=args.window)
    hook = config.hook
    hook_file = getattr(args, "hook_file", None)
    hook_cmd = getattr(args, "hook_cmd", None)
    if hook_file or hook_cmd:
        if hook_file:
            hook = replace(hook, letter_file=hook_file)
        if hook_cmd:
            hook = replace(hook, command=hook_cmd)
        mode = "both" if (hook.letter_file and hook.command) else ("file" if hook_file else "command")
        hook = replace(hook, mode=mode)
    config = replace(config, pipeline=pipeline, hook=hook)
    try:
        config.pipeline.validate()
        config.hook.validate()
    except ValueError as exc:
        raise _FlagError(str(exc)) from None
    return config


class _FlagError(Exception):
    pass


def _read_frame_file(path: Path):
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise _InputError(f"cannot read {path}: {exc}") from None
    try:
        return decode_image(data)
    except DecodeError as exc:
        raise _InputError(f"cannot decode {path}: {exc}") from None


class _InputError(Exception):
    pass


def _emit_json(doc: dict) -> None:
    from .io import encode_result

    print(encode_result(doc))


def cmd_recognize(args) -> int:
    config = _build_config(args)
    img = _read_frame_file(Path(args.path))
    result = process_frame(img, config.rules, config.pipeline)
    if args.brief:
        print(result.decision.letter)
    else:
        _emit_json(result_document(result))
    return 0


def cmd_batch(args) -> int:
    config = _build_config(args)
    directory = Path(args.directory)
    if not directory.is_dir():
        raise _InputError(f"not a directory: {directory}")
    files = sorted(p for p in directory.iterdir() if p.is_file())
    if not files:
        raise _InputError(f"no frames in {directory}")

    expected: list[str] | None = None
    if args.expected:
        try:
            lines = Path(args.expected).read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise _InputError(f"cannot read {args.expected}: {exc}") from None
        expected = [line.strip() for line in lines if line.strip()]
        if len(expected) != len(files):
            raise _InputError(
                f"{len(expected)} expected letters for {len(files)} frames"
            )

    tracker = SessionTracker(window=config.pipeline.window, start_time=0.0)
    emits: list[dict] = []
    correct = 0
    for index, path in enumerate(files):
        img = _read_frame_file(path)
        t = index / args.fps
        result = process_frame(img, config.rules, config.pipeline)
        letter = result.decision.letter
        event = tracker.observe(letter, t)
        line = {
            "frame_index": index,
            "file": path.name,
            "t": t,
            "letter": letter,
            "rule_id": result.decision.rule_id,
            "defect_count": result.decision.defect_count,
            "angle_deg": result.decision.angle_deg,
        }
        if event is not None:
            line["stable_letter"] = event.letter
            emits.append({"letter": event.letter, "t": t})
            if config.hook.mode != "none":
                emit_letter(event, config.hook)
        if expected is not None and letter == expected[index]:
            correct += 1
        _emit_json(line)

    summary: dict = {
        "frames": len(files),
        "emits": emits,
    }
    if tracker.metrics.a_o is not None:
        summary["a_o"] = tracker.metrics.a_o
    if expected is not None:
        summary["accuracy"] = correct / len(files)
    _emit_json({"summary": summary})
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    config = _build_config(args)
    app = create_app(config)
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        sock.bind((args.host, args.port))
    except OSError as exc:
        sock.close()
        print(f"cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 2
    host, port = sock.getsockname()[:2]
    print(f"listening on {host}:{port}", flush=True)
    server = uvicorn.Server(uvicorn.Config(app=app, log_level="warning"))
    server.run(sockets=[sock])
    sock.close()
    return 0


def _label_from_name(name: str) -> str | None:
    stem = name.split(".")[0]
    prefix = stem.replace("-", "_").split("_")[0]
    if prefix.upper() in LETTERS:
        return prefix.upper()
    if prefix.lower() == UNKNOWN:
        return UNKNOWN
    return None


def cmd_calibrate(args) -> int:
    config = _build_config(args)
    directory = Path(args.directory)
    if not directory.is_dir():
        raise _InputError(f"not a directory: {directory}")
    frames = []
    labels = []
    for path in sorted(p for p in directory.iterdir() if p.is_file()):
        label = _label_from_name(path.name)
        if label is None:
            continue
        frames.append(_read_frame_file(path))
        labels.append(label)
    if not frames:
        raise _InputError(f"no labeled frames in {directory}")

    result = calibrate_rules(
        frames, labels, base_rules=config.rules, base_pipeline=config.pipeline
    )
    tuned = replace(config, rules=result.rules, pipeline=result.pipeline)
    text = dump_config(tuned)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(
        f"accuracy {result.accuracy:.4f} on {len(frames)} labeled frames",
        file=sys.stderr,
    )
    return 0


_COMMANDS = {
    "recognize": cmd_recognize,
    "batch": cmd_batch,
    "serve": cmd_serve,
    "calibrate": cmd_calibrate,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _FlagError as exc:
        print(f"fingerspell: error: {exc}", file=sys.stderr)
        return 3
    except (_InputError, ConfigError, OSError) as exc:
        print(f"fingerspell: error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main(sys.argv[1:]))
