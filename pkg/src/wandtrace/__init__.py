"""Wand-gesture recognition for dark scenes.

A bright reflective tip is tracked across camera frames, its path is
accumulated into a single stroke image between two trigger zones, and a
letter classifier maps the stroke to a virtual GPIO action.
"""

__version__ = "0.1.0"

from .classify import GaussianNaiveBayes, LinearSVM, evaluate
from .dataset import Dataset, filter_labels, load_dataset, save_dataset, split
from .dispatch import VirtualGpio, default_bindings, dispatch
from .errors import WandtraceError
from .imaging import BitMask, Blob, Frame, find_blobs, primary_blob, threshold
from .persist import load_model, save_model
from .pipeline import Pipeline, PipelineConfig, PipelineReport, run_pipeline
from .preprocess import (
    PatternFeaturizer,
    PatternImage,
    denoise_median3,
    normalize_to_28,
)
from .synth import GestureScript, letter_path, render_sequence
from .trace import (
    TraceConfig,
    TraceState,
    TriggerZone,
    default_trace_config,
    initial_state,
    trace_step,
)

__all__ = [
    "BitMask", "Blob", "Dataset", "Frame", "GaussianNaiveBayes",
    "GestureScript", "LinearSVM", "PatternFeaturizer", "PatternImage",
    "Pipeline", "PipelineConfig", "PipelineReport", "TraceConfig",
    "TraceState", "TriggerZone", "VirtualGpio", "WandtraceError",
    "default_bindings", "default_trace_config", "denoise_median3",
    "dispatch", "evaluate", "filter_labels", "find_blobs", "initial_state",
    "letter_path", "load_dataset", "load_model", "normalize_to_28",
    "primary_blob", "render_sequence", "run_pipeline", "save_dataset",
    "save_model", "split", "threshold", "trace_step",
]
