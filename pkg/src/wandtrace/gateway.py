"""Live session protocol between the drawing UI and the pipeline.

The client never sends pixels: it reports pointer coordinates, the server
synthesizes the corresponding wand frame, runs one pipeline step and
answers with the full drawable state. Message handling is pure request in,
updates out, so the whole exchange is deterministic and unit-testable; the
WebSocket wrapper at the bottom is a thin shell.

Client messages (JSON, one per WebSocket frame):
    {"type": "session_start", "width": int, "height": int,
     "config": {optional overrides}}
    {"type": "pointer", "x": number, "y": number}
    {"type": "pointer_absent"}
    {"type": "reset"}

Server messages:
    {"type": "update", ...}   see _update() for the field list
    {"type": "error", "code": "protocol"|"validation", "message": str}
"""

from __future__ import annotations

import dataclasses

import numpy as np
from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from . import trace as tracing
from .dataset import letter_for_label
from .dispatch import VirtualGpio
from .errors import ProtocolError
from .imaging import MIN_FRAME_SIDE, BitMask
from .persist import algorithm_tag
from .pipeline import Pipeline, PipelineConfig
from .synth import render_pointer_frame

POINTER_BLOB_RADIUS = 6.0

_CONFIG_OVERRIDES = {
    "threshold": int,
    "connectivity": int,
    "min_area": int,
    "min_path_points": int,
    "gap_tolerance": int,
    "stroke_width": int,
}


def rle_encode(mask: BitMask) -> list[list[int]]:
    """Per row: run lengths alternating zero-runs first, summing to width.

    An all-zero row is [width]; a row starting with ones starts with 0.
    """
    rows = []
    bits = mask.bits
    width = mask.width
    for r in range(mask.height):
        row = bits[r]
        if not row.any():
            rows.append([width])
            continue
        flips = np.flatnonzero(np.diff(row)) + 1
        bounds = np.concatenate(([0], flips, [width]))
        runs = np.diff(bounds).tolist()
        if row[0]:
            runs.insert(0, 0)
        rows.append([int(v) for v in runs])
    return rows


def rle_decode(rows: list[list[int]], width: int, height: int) -> BitMask:
    if len(rows) != height:
        raise ValueError(f"expected {height} rows, got {len(rows)}")
    bits = np.zeros((height, width), dtype=bool)
    for r, runs in enumerate(rows):
        if sum(runs) != width:
            raise ValueError(f"row {r} runs sum to {sum(runs)}, not {width}")
        pos = 0
        value = False
        for run in runs:
            if run < 0:
                raise ValueError(f"row {r} has a negative run")
            if value:
                bits[r, pos:pos + run] = True
            pos += run
            value = not value
    return BitMask(bits)


class Session:
    """One client's pipeline, driven purely by protocol messages."""

    def __init__(self, model, bindings=None):
        self.model = model
        self.bindings = bindings
        self.pipe: Pipeline | None = None
        self.width = 0
        self.height = 0

    def handle(self, msg) -> list[dict]:
        try:
            return self._dispatch_message(msg)
        except ProtocolError as exc:
            return [{"type": "error", "code": "protocol", "message": str(exc)}]

    def _dispatch_message(self, msg) -> list[dict]:
        if not isinstance(msg, dict) or "type" not in msg:
            raise ProtocolError("message must be an object with a 'type' field")
        kind = msg["type"]
        if kind == "session_start":
            return self._start(msg)
        if self.pipe is None:
            raise ProtocolError(f"'{kind}' before session_start")
        if kind == "pointer":
            return self._pointer(msg)
        if kind == "pointer_absent":
            self.pipe.step_no_blob(self.width, self.height)
            return [self._update()]
        if kind == "reset":
            self.pipe.reset_trace()
            return [self._update()]
        raise ProtocolError(f"unknown message type {kind!r}")

    def _start(self, msg) -> list[dict]:
        try:
            width = int(msg["width"])
            height = int(msg["height"])
        except (KeyError, TypeError, ValueError):
            raise ProtocolError("session_start needs integer width and height")
        if width < MIN_FRAME_SIDE or height < MIN_FRAME_SIDE:
            raise ProtocolError(
                f"frame must be at least {MIN_FRAME_SIDE}x{MIN_FRAME_SIDE}")
        overrides = {}
        for key, value in (msg.get("config") or {}).items():
            caster = _CONFIG_OVERRIDES.get(key)
            if caster is None:
                raise ProtocolError(f"unknown config override {key!r}")
            try:
                overrides[key] = caster(value)
            except (TypeError, ValueError):
                raise ProtocolError(f"bad value for config override {key!r}")
        try:
            config = PipelineConfig.default(width, height, **overrides)
        except ValueError as exc:
            raise ProtocolError(str(exc))
        if self.bindings is not None:
            config = dataclasses.replace(config, bindings=self.bindings)
        self.width, self.height = width, height
        self.pipe = Pipeline(config, self.model, VirtualGpio())
        self.pipe.state = tracing.initial_state(width, height)
        return [self._update()]

    def _pointer(self, msg) -> list[dict]:
        try:
            x = float(msg["x"])
            y = float(msg["y"])
        except (KeyError, TypeError, ValueError):
            raise ProtocolError("pointer needs numeric x and y")
        if not (0 <= x <= self.width - 1 and 0 <= y <= self.height - 1):
            return [{"type": "error", "code": "validation",
                     "message": f"pointer ({x}, {y}) outside "
                                f"{self.width}x{self.height}"}]
        frame = render_pointer_frame(x, y, self.width, self.height,
                                     index=self.pipe.frames_consumed + 1,
                                     radius=POINTER_BLOB_RADIUS)
        events = self.pipe.step(frame)
        completed = next((e for e in events if e.kind == "completed"), None)
        return [self._update(event=completed)]

    def _update(self, event=None) -> dict:
        state = self.pipe.state
        zones = self.pipe.config.trace
        prediction = None
        pins = None
        if event is not None and event.kind == "completed":
            prediction = {
                "label": event.label,
                "letter": event.letter,
                "scores": {str(k): v for k, v in event.scores.items()},
            }
            pins = {str(pin): level
                    for pin, level in sorted(self.pipe.gpio.pins.items())}
        return {
            "type": "update",
            "frame_index": self.pipe.frames_consumed,
            "phase": state.phase.value,
            "centroid": list(self.pipe.last_centroid)
                        if self.pipe.last_centroid is not None else None,
            "path": [[x, y] for _, (x, y) in state.path],
            "zones": {
                "start": _zone_dict(zones.start_zone),
                "end": _zone_dict(zones.end_zone),
            },
            "accumulator": {
                "width": state.accumulator.width,
                "height": state.accumulator.height,
                "rows": rle_encode(state.accumulator),
            },
            "prediction": prediction,
            "pins": pins,
        }


def _zone_dict(zone) -> dict:
    return {"cx": zone.center[0], "cy": zone.center[1], "r": zone.radius,
            "role": zone.role}


def create_app(model, bindings=None) -> FastAPI:
    """App exposing GET /health and the /session WebSocket."""
    app = FastAPI(title="wandtrace gateway")

    @app.get("/health")
    def health():
        return {
            "status": "ok",
            "algorithm": algorithm_tag(model),
            "classes": [int(c) for c in model.classes_],
            "letters": [letter_for_label(int(c)) for c in model.classes_],
            "dim": int(model.n_features_in_),
        }

    @app.websocket("/session")
    async def session_socket(ws: WebSocket):
        await ws.accept()
        session = Session(model, bindings=bindings)
        try:
            while True:
                try:
                    msg = await ws.receive_json()
                except WebSocketDisconnect:
                    raise
                except Exception:
                    await ws.send_json({"type": "error", "code": "protocol",
                                        "message": "message is not valid JSON"})
                    continue
                for reply in session.handle(msg):
                    await ws.send_json(reply)
        except WebSocketDisconnect:
            pass

    return app
