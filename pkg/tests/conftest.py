import numpy as np
import pytest

from wandtrace.classify import LinearSVM
from wandtrace.preprocess import denoise_median3, normalize_to_28
from wandtrace.synth import letter_path, rasterize_script
from wandtrace.trace import default_trace_config

SMALL_W, SMALL_H = 160, 120


@pytest.fixture(scope="session")
def small_trace_config():
    return default_trace_config(SMALL_W, SMALL_H)


@pytest.fixture(scope="session")
def ac_model(small_trace_config):
    """Linear SVM telling 'A' from 'C', trained on rasterized gestures."""
    X, y = [], []
    for letter, label in (("A", 0), ("C", 2)):
        for seed in range(30):
            script = letter_path(letter, small_trace_config, SMALL_W, SMALL_H,
                                 seed=seed)
            pattern = rasterize_script(script, SMALL_W, SMALL_H)
            X.append(normalize_to_28(denoise_median3(pattern)))
            y.append(label)
    return LinearSVM(seed=0).fit(np.asarray(X), np.asarray(y))
