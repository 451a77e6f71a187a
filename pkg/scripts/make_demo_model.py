"""Train a small A/C model from synthetic gestures and save it.

Handy when no alphabet CSV is around: the result is good enough to drive
`wandtrace serve` and the browser simulator.

Usage: python scripts/make_demo_model.py [OUT] [--per-letter N]
"""

import argparse

import numpy as np

from wandtrace.classify import LinearSVM
from wandtrace.persist import save_model
from wandtrace.preprocess import denoise_median3, normalize_to_28
from wandtrace.synth import letter_path, rasterize_script
from wandtrace.trace import default_trace_config

WIDTH, HEIGHT = 320, 240


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", nargs="?", default="demo_model.txt")
    parser.add_argument("--per-letter", type=int, default=60)
    args = parser.parse_args()

    config = default_trace_config(WIDTH, HEIGHT)
    X, y = [], []
    for letter, label in (("A", 0), ("C", 2)):
        for seed in range(args.per_letter):
            script = letter_path(letter, config, WIDTH, HEIGHT, seed=seed)
            pattern = rasterize_script(script, WIDTH, HEIGHT)
            X.append(normalize_to_28(denoise_median3(pattern)))
            y.append(label)

    model = LinearSVM(seed=0).fit(np.asarray(X), np.asarray(y))
    save_model(model, args.out)
    print(f"wrote {args.out} ({args.per_letter} gestures per letter)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
