"""HTTP facade: stateless recognition plus debounced session streams.

Frames arrive as whole request bodies (PGM or PNG); at desk-scale
frame rates request/response beats a streaming protocol. Each session
owns its state behind a lock so frames are processed in arrival order
even under concurrent connections.
"""

from __future__ import annotations

import secrets
import threading
import time
from dataclasses import dataclass

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .errors import DecodeError
from .io import AppConfig, decode_image, emit_letter, result_document
from .pipeline import SessionMetrics, SessionTracker, process_frame

ALLOWED_CONTENT_TYPES = ("image/x-portable-graymap", "image/png")


@dataclass
class _Session:
    id: str
    tracker: SessionTracker
    lock: threading.Lock
    last_touch: float


class SessionStore:
    """Live sessions with lazy idle expiry; thread-safe registry."""

    def __init__(self, window: int, idle_timeout: float, clock):
        self._window = window
        self._idle_timeout = idle_timeout
        self._clock = clock
        self._sessions: dict[str, _Session] = {}
        self._lock = threading.Lock()

    def _sweep(self, now: float) -> None:
        dead = [
            sid
            for sid, s in self._sessions.items()
            if now - s.last_touch > self._idle_timeout
        ]
        for sid in dead:
            del self._sessions[sid]

    def create(self) -> _Session:
        now = self._clock()
        session = _Session(
            id=secrets.token_hex(16),
            tracker=SessionTracker(window=self._window, start_time=now),
            lock=threading.Lock(),
            last_touch=now,
        )
        with self._lock:
            self._sweep(now)
            self._sessions[session.id] = session
        return session

    def get(self, sid: str) -> _Session | None:
        with self._lock:
            self._sweep(self._clock())
            return self._sessions.get(sid)

    def remove(self, sid: str) -> _Session | None:
        with self._lock:
            self._sweep(self._clock())
            return self._sessions.pop(sid, None)


def _metrics_document(metrics: SessionMetrics) -> dict:
    return {
        "frames_processed": metrics.frames_processed,
        "recognitions_emitted": metrics.recognitions_emitted,
        "elapsed_to_first_emit": metrics.elapsed_to_first_emit,
        "a_o": metrics.a_o,
    }


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse({"error": message}, status_code=status)


def create_app(config: AppConfig | None = None, clock=time.monotonic) -> FastAPI:
    """Build the application; the clock is injectable for tests."""
    if config is None:
        config = AppConfig()
    app = FastAPI(title="fingerspell", docs_url=None, redoc_url=None)

    if config.service.cors_origin:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=[config.service.cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    store = SessionStore(
        window=config.pipeline.window,
        idle_timeout=config.service.idle_timeout,
        clock=clock,
    )
    app.state.config = config
    app.state.sessions = store

    async def _read_frame(request: Request):
        """Common gate for frame uploads; returns (image, None) or (None, response)."""
        content_type = request.headers.get("content-type", "").split(";")[0].strip().lower()
        if content_type not in ALLOWED_CONTENT_TYPES:
            return None, _error(415, f"unsupported content type {content_type!r}")
        body = await request.body()
        if len(body) > config.service.max_body_bytes:
            return None, _error(
                413, f"body of {len(body)} bytes exceeds {config.service.max_body_bytes}"
            )
        try:
            return decode_image(body), None
        except DecodeError as exc:
            return None, _error(400, f"undecodable image: {exc}")

    @app.get("/v1/healthz")
    async def healthz():
        from . import __version__

        return {"status": "ok", "version": __version__}

    @app.post("/v1/recognize")
    async def recognize(request: Request):
        img, failure = await _read_frame(request)
        if failure is not None:
            return failure
        result = process_frame(img, config.rules, config.pipeline)
        return JSONResponse(result_document(result))

    @app.post("/v1/sessions")
    async def create_session():
        session = store.create()
        return JSONResponse({"id": session.id}, status_code=201)

    @app.post("/v1/sessions/{sid}/frames")
    async def post_frame(sid: str, request: Request):
        session = store.get(sid)
        if session is None:
            return _error(404, "unknown or expired session")
        img, failure = await _read_frame(request)
        if failure is not None:
            return failure
        with session.lock:
            now = clock()
            session.last_touch = now
            result = process_frame(img, config.rules, config.pipeline)
            event = session.tracker.observe(result.decision.letter, now)
            metrics = _metrics_document(session.tracker.metrics)
        doc = result_document(result)
        if event is not None:
            doc["stable_letter"] = event.letter
            if config.hook.mode != "none":
                emit_letter(event, config.hook)
        doc["metrics"] = metrics
        return JSONResponse(doc)

    @app.delete("/v1/sessions/{sid}")
    async def delete_session(sid: str):
        session = store.remove(sid)
        if session is None:
            return _error(404, "unknown or expired session")
        with session.lock:
            return JSONResponse(_metrics_document(session.tracker.metrics))

    if config.service.ui_dir:
        app.mount("/ui", StaticFiles(directory=config.service.ui_dir, html=True), name="ui")

    return app
