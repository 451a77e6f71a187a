"""Trigger-zone state machine and cumulative stroke accumulation.

Tracing starts when the tracked blob enters the start circle, accumulates
the union of blob pixels frame by frame (bridging large centroid jumps with
a rasterized segment so the stroke stays connected at low frame rates), and
completes when the blob reaches the end circle with a long enough path.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import WrongPhaseError
from .imaging import Blob, BitMask
from .preprocess import PatternImage

DEFAULT_MIN_PATH_POINTS = 10
DEFAULT_GAP_TOLERANCE = 5
DEFAULT_STROKE_WIDTH = 3


class Phase(enum.Enum):
    IDLE = "idle"
    TRACING = "tracing"
    COMPLETE = "complete"


class EventKind(enum.Enum):
    STARTED = "started"
    COMPLETED = "completed"
    ABORTED = "aborted"


@dataclass(frozen=True)
class TraceEvent:
    kind: EventKind
    # Completed events carry the accumulator frozen at transition time.
    pattern: PatternImage | None = None


@dataclass(frozen=True)
class TriggerZone:
    """Circular screen region; entering it drives the state machine."""

    center: tuple[float, float]
    radius: float
    role: str  # "start" | "end"

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError(f"zone radius must be positive, got {self.radius}")
        if self.role not in ("start", "end"):
            raise ValueError(f"zone role must be 'start' or 'end', got {self.role!r}")

    def contains(self, point: tuple[float, float]) -> bool:
        dx = point[0] - self.center[0]
        dy = point[1] - self.center[1]
        return dx * dx + dy * dy <= self.radius * self.radius


@dataclass(frozen=True)
class TraceConfig:
    start_zone: TriggerZone
    end_zone: TriggerZone
    min_path_points: int = DEFAULT_MIN_PATH_POINTS
    gap_tolerance: int = DEFAULT_GAP_TOLERANCE
    stroke_width: int = DEFAULT_STROKE_WIDTH

    def __post_init__(self):
        dx = self.end_zone.center[0] - self.start_zone.center[0]
        dy = self.end_zone.center[1] - self.start_zone.center[1]
        if math.hypot(dx, dy) <= self.start_zone.radius + self.end_zone.radius:
            raise ValueError("start and end zones must not overlap")
        if self.min_path_points < 1:
            raise ValueError("min_path_points must be >= 1")
        if self.gap_tolerance < 0:
            raise ValueError("gap_tolerance must be >= 0")
        if self.stroke_width < 1:
            raise ValueError("stroke_width must be >= 1")


def default_trace_config(width: int, height: int, **overrides) -> TraceConfig:
    """Zones at 15% / 85% of the width, vertically centered."""
    radius = 0.08 * min(width, height)
    start = TriggerZone((0.15 * width, 0.5 * height), radius, "start")
    end = TriggerZone((0.85 * width, 0.5 * height), radius, "end")
    for zone in (start, end):
        cx, cy = zone.center
        if not (radius <= cx <= width - 1 - radius and radius <= cy <= height - 1 - radius):
            raise ValueError(f"{zone.role} zone does not fit a {width}x{height} frame")
    return TraceConfig(start_zone=start, end_zone=end, **overrides)


@dataclass(frozen=True)
class TraceState:
    """Immutable state machine value; trace_step returns a new state."""

    phase: Phase
    path: tuple[tuple[int, tuple[float, float]], ...]
    accumulator: BitMask
    missing_run: int
    frames_seen: int


def initial_state(width: int, height: int) -> TraceState:
    return TraceState(
        phase=Phase.IDLE,
        path=(),
        accumulator=BitMask(np.zeros((height, width), dtype=bool)),
        missing_run=0,
        frames_seen=0,
    )


def reset(state: TraceState) -> TraceState:
    """Back to Idle with an empty accumulator; the frame counter persists."""
    fresh = initial_state(state.accumulator.width, state.accumulator.height)
    return replace(fresh, frames_seen=state.frames_seen)


def _stamp_pixels(bits: np.ndarray, blob: Blob) -> None:
    xs, ys = blob.coords()
    bits[ys, xs] = True


def _bresenham(x0: int, y0: int, x1: int, y1: int):
    """Integer line pixels from (x0, y0) to (x1, y1) inclusive."""
    dx = abs(x1 - x0)
    dy = abs(y1 - y0)
    sx = 1 if x0 < x1 else -1
    sy = 1 if y0 < y1 else -1
    err = dx - dy
    x, y = x0, y0
    while True:
        yield x, y
        if x == x1 and y == y1:
            return
        e2 = 2 * err
        if e2 > -dy:
            err -= dy
            x += sx
        if e2 < dx:
            err += dx
            y += sy


def _stamp_segment(bits: np.ndarray, p0: tuple[float, float],
                   p1: tuple[float, float], width: int) -> None:
    """Set every pixel within width//2 Chebyshev distance of the line."""
    h, w = bits.shape
    half = width // 2
    x0, y0 = int(p0[0] + 0.5), int(p0[1] + 0.5)
    x1, y1 = int(p1[0] + 0.5), int(p1[1] + 0.5)
    for x, y in _bresenham(x0, y0, x1, y1):
        ya, yb = max(0, y - half), min(h, y + half + 1)
        xa, xb = max(0, x - half), min(w, x + half + 1)
        if ya < yb and xa < xb:
            bits[ya:yb, xa:xb] = True


def bridge(canvas: BitMask, p0: tuple[float, float], p1: tuple[float, float],
           width: int) -> BitMask:
    """Union the canvas with a rasterized stroke from p0 to p1."""
    bits = canvas.bits.copy()
    _stamp_segment(bits, p0, p1, width)
    return BitMask(bits)


def trace_step(state: TraceState, blob: Blob | None,
               config: TraceConfig) -> tuple[TraceState, TraceEvent | None]:
    """Advance the state machine by one frame.

    Returns the successor state and the transition event, if any. Complete
    is terminal until the caller resets.
    """
    frames = state.frames_seen + 1

    if state.phase is Phase.COMPLETE:
        return replace(state, frames_seen=frames), None

    if state.phase is Phase.IDLE:
        if blob is not None and config.start_zone.contains(blob.centroid):
            bits = np.zeros_like(state.accumulator.bits)
            _stamp_pixels(bits, blob)
            started = TraceState(
                phase=Phase.TRACING,
                path=((frames, blob.centroid),),
                accumulator=BitMask(bits),
                missing_run=0,
                frames_seen=frames,
            )
            return started, TraceEvent(EventKind.STARTED)
        return replace(state, frames_seen=frames), None

    # Tracing.
    if blob is None:
        missing = state.missing_run + 1
        if missing > config.gap_tolerance:
            aborted = replace(initial_state(state.accumulator.width,
                                            state.accumulator.height),
                              frames_seen=frames)
            return aborted, TraceEvent(EventKind.ABORTED)
        return replace(state, missing_run=missing, frames_seen=frames), None

    bits = state.accumulator.bits.copy()
    _stamp_pixels(bits, blob)
    prev = state.path[-1][1]
    cx, cy = blob.centroid
    jump = math.hypot(cx - prev[0], cy - prev[1])
    if jump > 2.0 * math.sqrt(blob.area / math.pi):
        _stamp_segment(bits, prev, blob.centroid, config.stroke_width)
    path = state.path + ((frames, blob.centroid),)
    accumulator = BitMask(bits)

    if config.end_zone.contains(blob.centroid) and len(path) >= config.min_path_points:
        done = TraceState(
            phase=Phase.COMPLETE,
            path=path,
            accumulator=accumulator,
            missing_run=0,
            frames_seen=frames,
        )
        return done, TraceEvent(EventKind.COMPLETED, PatternImage.from_mask(accumulator))

    tracing = TraceState(
        phase=Phase.TRACING,
        path=path,
        accumulator=accumulator,
        missing_run=0,
        frames_seen=frames,
    )
    return tracing, None


def finalize_pattern(state: TraceState) -> PatternImage:
    """The accumulated stroke as a grayscale image; Complete phase only."""
    if state.phase is not Phase.COMPLETE:
        raise WrongPhaseError(f"cannot finalize pattern in phase {state.phase.value}")
    return PatternImage.from_mask(state.accumulator)
