"""Command-line front end: train, eval, synth, run, serve.

Machine-readable results go to stdout as JSON; progress and errors go to
stderr. The model path for eval/run/serve falls back to WANDTRACE_MODEL.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .classify import GaussianNaiveBayes, LinearSVM, evaluate
from .dataset import filter_labels, letters_to_labels, load_dataset, split
from .dispatch import VirtualGpio, load_bindings
from .errors import WandtraceError
from .persist import algorithm_tag, load_model, save_model
from .pgm import read_sequence, write_sequence
from .pipeline import PipelineConfig, run_pipeline
from .synth import (
    DEFAULT_BLOB_RADIUS,
    DEFAULT_JITTER_SIGMA,
    DEFAULT_NOISE_MAX,
    DEFAULT_SAMPLES_PER_SEGMENT,
    format_script,
    letter_path,
    render_sequence,
)
from .trace import default_trace_config

MODEL_ENV = "WANDTRACE_MODEL"


def _log(message: str):
    print(message, file=sys.stderr)


def _emit(payload: dict):
    print(json.dumps(payload, indent=2))


def _model_path(args) -> str:
    path = args.model or os.environ.get(MODEL_ENV)
    if not path:
        raise WandtraceError(
            f"no model path: pass --model or set {MODEL_ENV}")
    return path


def _cmd_train(args) -> int:
    ds = load_dataset(args.data)
    _log(f"loaded {len(ds)} rows from {args.data}")
    if args.labels:
        ds = filter_labels(ds, letters_to_labels(args.labels))
        _log(f"kept {len(ds)} rows with labels {args.labels}")
    train, test = split(ds, fraction=args.split_fraction, seed=args.seed)
    if args.algo == "svm":
        model = LinearSVM(C=args.C, tol=args.tol,
                          max_epochs=args.max_epochs, seed=args.seed)
    else:
        model = GaussianNaiveBayes()
    model.fit(train.features, train.labels)
    accuracy = evaluate(model, test.features, test.labels)
    if args.out:
        save_model(model, args.out)
        _log(f"model written to {args.out}")
    _emit({
        "algorithm": args.algo,
        "classes": [int(c) for c in model.classes_],
        "train_rows": len(train),
        "test_rows": len(test),
        "accuracy": round(accuracy, 4),
        "model": args.out,
    })
    return 0


def _cmd_eval(args) -> int:
    model = load_model(_model_path(args))
    ds = load_dataset(args.data)
    if args.labels:
        ds = filter_labels(ds, letters_to_labels(args.labels))
    accuracy = evaluate(model, ds.features, ds.labels)
    _emit({
        "algorithm": algorithm_tag(model),
        "rows": len(ds),
        "accuracy": round(accuracy, 4),
    })
    return 0


def _cmd_synth(args) -> int:
    config = default_trace_config(args.width, args.height)
    script = letter_path(args.letter, config, args.width, args.height,
                         samples_per_segment=args.samples_per_segment,
                         blob_radius=args.blob_radius,
                         background_noise_max=args.noise_max,
                         jitter_sigma=args.jitter_sigma,
                         seed=args.seed)
    frames = render_sequence(script, args.width, args.height)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    paths = write_sequence(out, frames)
    (out / "script.txt").write_text(format_script(script), encoding="utf-8")
    _log(f"{len(paths)} frames written to {out}")
    _emit({
        "letter": args.letter.upper(),
        "frames": len(paths),
        "directory": str(out),
        "manifest": str(out / "script.txt"),
    })
    return 0


def _cmd_run(args) -> int:
    model = load_model(_model_path(args))
    frames = list(read_sequence(args.frames))
    if not frames:
        _log(f"no frames found in {args.frames}")
        config = PipelineConfig.default(args.width, args.height,
                                        threshold=args.threshold)
        report = run_pipeline([], config, model)
        _emit(report.to_dict())
        return 0
    h, w = frames[0].pixels.shape
    overrides = {"threshold": args.threshold}
    if args.bindings:
        overrides["bindings"] = load_bindings(args.bindings)
    config = PipelineConfig.default(w, h, **overrides)
    report = run_pipeline(frames, config, model, VirtualGpio())
    _emit(report.to_dict())
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .gateway import create_app

    model = load_model(_model_path(args))
    bindings = load_bindings(args.bindings) if args.bindings else None
    app = create_app(model, bindings=bindings)
    _log(f"serving {algorithm_tag(model)} model on "
         f"{args.host}:{args.port}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wandtrace",
        description="Dark-scene wand gesture recognition toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train a letter classifier on a CSV")
    p.add_argument("--data", required=True, help="785-column CSV path")
    p.add_argument("--labels", default="",
                   help="comma-separated letters to keep, e.g. A,C")
    p.add_argument("--algo", choices=("svm", "nb"), default="svm")
    p.add_argument("--split-fraction", type=float, default=0.8)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--max-epochs", type=int, default=1000)
    p.add_argument("--out", default="", help="model file to write")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="evaluate a saved model on a CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--labels", default="")
    p.add_argument("--model", default="")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("synth", help="render a synthetic gesture sequence")
    p.add_argument("--letter", required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--width", type=int, default=320)
    p.add_argument("--height", type=int, default=240)
    p.add_argument("--samples-per-segment", type=int,
                   default=DEFAULT_SAMPLES_PER_SEGMENT)
    p.add_argument("--blob-radius", type=float, default=DEFAULT_BLOB_RADIUS)
    p.add_argument("--noise-max", type=int, default=DEFAULT_NOISE_MAX)
    p.add_argument("--jitter-sigma", type=float, default=DEFAULT_JITTER_SIGMA)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("run", help="run the pipeline over a PGM directory")
    p.add_argument("--frames", required=True, help="directory of PGM frames")
    p.add_argument("--model", default="")
    p.add_argument("--bindings", default="", help="letter/pin bindings file")
    p.add_argument("--threshold", type=int, default=200)
    p.add_argument("--width", type=int, default=320,
                   help="frame size assumed when the directory is empty")
    p.add_argument("--height", type=int, default=240)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("serve", help="serve the live session gateway")
    p.add_argument("--model", default="")
    p.add_argument("--bindings", default="")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except WandtraceError as exc:
        _log(f"error: {exc}")
        return 2
    except OSError as exc:
        _log(f"error: {exc}")
        return 2
    except ValueError as exc:
        _log(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
