"""End-to-end orchestration: frames in, predictions and pin changes out.

A Pipeline instance consumes frames one at a time (live sessions) or in
bulk (recorded sequences); the two modes produce identical reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import trace as tracing
from .classify import score_classes
from .dataset import letter_for_label
from .dispatch import PinAction, VirtualGpio, default_bindings, dispatch
from .errors import DimensionMismatchError, EmptyPatternError
from .imaging import (
    DEFAULT_CONNECTIVITY,
    DEFAULT_MIN_AREA,
    DEFAULT_THRESHOLD,
    Frame,
    find_blobs,
    primary_blob,
    threshold,
)
from .preprocess import FEATURE_DIM, denoise_median3, normalize_to_28
from .trace import EventKind, Phase, TraceConfig


@dataclass(frozen=True)
class PipelineConfig:
    trace: TraceConfig
    threshold: int = DEFAULT_THRESHOLD
    connectivity: int = DEFAULT_CONNECTIVITY
    min_area: int = DEFAULT_MIN_AREA
    bindings: dict[int, PinAction] = field(default_factory=default_bindings)
    model_path: str | None = None

    @classmethod
    def default(cls, width: int, height: int, **overrides) -> "PipelineConfig":
        zone_keys = {"min_path_points", "gap_tolerance", "stroke_width"}
        trace_overrides = {k: overrides.pop(k) for k in list(overrides)
                           if k in zone_keys}
        return cls(trace=tracing.default_trace_config(width, height,
                                                      **trace_overrides),
                   **overrides)


@dataclass(frozen=True)
class PipelineEvent:
    kind: str                       # "started" | "completed" | "aborted"
    frame_index: int
    label: int | None = None
    letter: str | None = None
    scores: dict[int, float] | None = None
    pin: int | None = None
    level: str | None = None
    note: str | None = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "frame_index": self.frame_index}
        if self.label is not None:
            out["label"] = self.label
            out["letter"] = self.letter
            out["scores"] = {str(k): v for k, v in self.scores.items()}
        if self.pin is not None:
            out["pin"] = self.pin
            out["level"] = self.level
        if self.note is not None:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class PipelineReport:
    frames_consumed: int
    events: tuple[PipelineEvent, ...]
    predictions: tuple[int, ...]
    pin_states: dict[int, str]

    def to_dict(self) -> dict:
        return {
            "frames_consumed": self.frames_consumed,
            "events": [e.to_dict() for e in self.events],
            "predictions": list(self.predictions),
            "pin_states": {str(pin): level
                           for pin, level in sorted(self.pin_states.items())},
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)


class Pipeline:
    """Incremental frame consumer around one trace state machine.

    The model is read-only here; pin changes go to the supplied gpio.
    Dimensions are fixed by the first frame.
    """

    def __init__(self, config: PipelineConfig, model, gpio: VirtualGpio):
        if model.n_features_in_ != FEATURE_DIM:
            raise DimensionMismatchError(
                f"pipeline needs a {FEATURE_DIM}-feature model, "
                f"got {model.n_features_in_}")
        self.config = config
        self.model = model
        self.gpio = gpio
        self.state: tracing.TraceState | None = None
        self.events: list[PipelineEvent] = []
        self.last_centroid: tuple[float, float] | None = None
        self._reset_pending = False

    @property
    def frames_consumed(self) -> int:
        return self.state.frames_seen if self.state is not None else 0

    def _ensure_state(self, width: int, height: int):
        if self.state is None:
            self.state = tracing.initial_state(width, height)
        elif (self.state.accumulator.width != width
              or self.state.accumulator.height != height):
            raise ValueError(
                f"frame size changed mid-run: "
                f"{self.state.accumulator.width}x{self.state.accumulator.height}"
                f" -> {width}x{height}")

    def step(self, frame: Frame) -> list[PipelineEvent]:
        h, w = frame.pixels.shape
        self._ensure_state(w, h)
        mask = threshold(frame, self.config.threshold)
        blobs = find_blobs(mask, connectivity=self.config.connectivity,
                           min_area=self.config.min_area)
        return self._advance(primary_blob(blobs))

    def step_no_blob(self, width: int, height: int) -> list[PipelineEvent]:
        """Advance one frame with the wand known to be absent."""
        self._ensure_state(width, height)
        return self._advance(None)

    def reset_trace(self):
        """Drop the current segment without consuming a frame."""
        if self.state is not None:
            self.state = tracing.reset(self.state)
        self._reset_pending = False
        self.last_centroid = None

    def _advance(self, blob) -> list[PipelineEvent]:
        if self._reset_pending:
            # A gesture completed last frame; this frame opens a new segment.
            self.state = tracing.reset(self.state)
            self._reset_pending = False
        self.state, event = tracing.trace_step(self.state, blob,
                                               self.config.trace)
        self.last_centroid = blob.centroid if blob is not None else None
        index = self.state.frames_seen
        fired: list[PipelineEvent] = []
        if event is None:
            return fired
        if event.kind is EventKind.STARTED:
            fired.append(PipelineEvent("started", index))
        elif event.kind is EventKind.ABORTED:
            fired.append(PipelineEvent("aborted", index))
        else:
            fired.append(self._complete(event, index))
            self._reset_pending = True
        self.events.extend(fired)
        return fired

    def _complete(self, event, index: int) -> PipelineEvent:
        try:
            features = normalize_to_28(denoise_median3(event.pattern))
        except EmptyPatternError as exc:
            return PipelineEvent("aborted", index, note=str(exc))
        X = features.reshape(1, -1)
        label = int(self.model.predict(X)[0])
        scores = score_classes(self.model, X)[0]
        score_map = {int(c): float(s)
                     for c, s in zip(self.model.classes_, scores)}
        report = dispatch(label, self.config.bindings, self.gpio)
        return PipelineEvent("completed", index, label=label,
                             letter=report.letter, scores=score_map,
                             pin=report.pin, level=report.level)

    def report(self) -> PipelineReport:
        return PipelineReport(
            frames_consumed=self.frames_consumed,
            events=tuple(self.events),
            predictions=tuple(e.label for e in self.events
                              if e.kind == "completed"),
            pin_states=dict(self.gpio.pins),
        )


def run_pipeline(frames, config: PipelineConfig, model,
                 gpio: VirtualGpio | None = None) -> PipelineReport:
    """Feed an ordered frame source through a fresh pipeline."""
    pipe = Pipeline(config, model, gpio if gpio is not None else VirtualGpio())
    for frame in frames:
        pipe.step(frame)
    return pipe.report()
