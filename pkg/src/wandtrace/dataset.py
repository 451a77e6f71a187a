"""Loading, saving, filtering and splitting labeled 28x28 letter data.

The on-disk format is CSV: one row per sample, a label in 0-25 followed by
784 pixel values in 0-255, with an optional header line. Pixels are scaled
to [0, 1] on load.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from .errors import (
    DatasetFormatError,
    DegenerateSplitError,
    EmptyResultError,
)
from .preprocess import FEATURE_DIM

LETTERS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
N_COLUMNS = 1 + FEATURE_DIM


def label_for_letter(letter: str) -> int:
    u = letter.upper()
    if len(u) != 1 or u not in LETTERS:
        raise ValueError(f"not a letter A-Z: {letter!r}")
    return LETTERS.index(u)


def letter_for_label(label: int) -> str:
    if not 0 <= label < len(LETTERS):
        raise ValueError(f"label out of range 0-25: {label}")
    return LETTERS[label]


def letters_to_labels(spec: str) -> list[int]:
    """Comma-separated letters ("A,C") to sorted unique labels ([0, 2])."""
    labels = {label_for_letter(part.strip()) for part in spec.split(",") if part.strip()}
    if not labels:
        raise ValueError(f"no letters in {spec!r}")
    return sorted(labels)


@dataclass(frozen=True)
class Dataset:
    features: np.ndarray  # (n, 784) float64 in [0, 1]
    labels: np.ndarray    # (n,) int64 in 0-25
    source: str = ""

    def __post_init__(self):
        f, y = self.features, self.labels
        if f.ndim != 2 or f.shape[1] != FEATURE_DIM:
            raise ValueError(f"features must be (n, {FEATURE_DIM}), got {f.shape}")
        if y.shape != (f.shape[0],):
            raise ValueError("labels must be one per feature row")
        if len(y) and (y.min() < 0 or y.max() > 25):
            raise ValueError("labels must be in 0-25")
        if f.size and (f.min() < 0.0 or f.max() > 1.0):
            raise ValueError("features must be in [0, 1]")
        f.setflags(write=False)
        y.setflags(write=False)

    def __len__(self) -> int:
        return len(self.labels)


def _looks_like_header(first_line: str) -> bool:
    cell = first_line.split(",", 1)[0].strip()
    try:
        int(cell)
    except ValueError:
        return True
    return False


def load_dataset(path: str | Path) -> Dataset:
    path = Path(path)
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline()
        if first == "":
            raise EmptyResultError(f"{path} is empty")
        header = bool(first.strip()) and _looks_like_header(first)

        # Field counts checked line by line so errors name the exact row.
        line_numbers = []
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            count = line.count(",") + 1
            if count != N_COLUMNS:
                raise DatasetFormatError(
                    lineno, f"expected {N_COLUMNS} fields, found {count}")
            line_numbers.append(lineno)
        if not header:
            if first.strip():
                count = first.count(",") + 1
                if count != N_COLUMNS:
                    raise DatasetFormatError(
                        1, f"expected {N_COLUMNS} fields, found {count}")
                line_numbers.insert(0, 1)

    if not line_numbers:
        raise EmptyResultError(f"{path} has no data rows")

    df = pd.read_csv(path, header=0 if header else None)
    row_line = np.asarray(line_numbers)

    def fail_at(mask: np.ndarray, message: str):
        idx = int(np.flatnonzero(mask)[0])
        raise DatasetFormatError(int(row_line[idx]), message)

    for col in df.columns[df.dtypes == object]:
        coerced = pd.to_numeric(df[col], errors="coerce")
        bad = coerced.isna().to_numpy() & df[col].notna().to_numpy()
        if bad.any():
            fail_at(bad, f"non-integer value {df[col][np.flatnonzero(bad)[0]]!r}")
        df[col] = coerced

    values = df.to_numpy(dtype=np.float64)
    nan_rows = np.isnan(values).any(axis=1)
    if nan_rows.any():
        fail_at(nan_rows, "missing value")
    frac_rows = (values != np.floor(values)).any(axis=1)
    if frac_rows.any():
        fail_at(frac_rows, "non-integer value")
    labels = values[:, 0]
    bad_label = (labels < 0) | (labels > 25)
    if bad_label.any():
        fail_at(bad_label, "label out of range 0-25")
    pixels = values[:, 1:]
    bad_pixel = ((pixels < 0) | (pixels > 255)).any(axis=1)
    if bad_pixel.any():
        fail_at(bad_pixel, "pixel value out of range 0-255")

    return Dataset(features=pixels / 255.0,
                   labels=labels.astype(np.int64),
                   source=str(path))


def save_dataset(ds: Dataset, path: str | Path) -> None:
    """Inverse of load_dataset (no header line)."""
    pixels = np.rint(ds.features * 255.0).astype(np.int64)
    table = np.column_stack([ds.labels, pixels])
    pd.DataFrame(table).to_csv(path, header=False, index=False)


def filter_labels(ds: Dataset, labels) -> Dataset:
    wanted = sorted(set(labels))
    for lab in wanted:
        letter_for_label(lab)  # range check
    keep = np.isin(ds.labels, wanted)
    if not keep.any():
        raise EmptyResultError(f"no rows with labels {wanted}")
    return Dataset(features=ds.features[keep].copy(),
                   labels=ds.labels[keep].copy(),
                   source=ds.source)


def split(ds: Dataset, fraction: float = 0.8,
          seed: int = 42) -> tuple[Dataset, Dataset]:
    """Seeded shuffle, then the first floor(fraction*n) rows train."""
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must be in (0, 1), got {fraction}")
    n = len(ds)
    n_train = int(np.floor(fraction * n))
    if n_train == 0 or n_train == n:
        raise DegenerateSplitError(
            f"split of {n} rows at {fraction} leaves an empty side")
    perm = np.random.default_rng(seed).permutation(n)
    tr, te = perm[:n_train], perm[n_train:]
    return (
        Dataset(ds.features[tr].copy(), ds.labels[tr].copy(), ds.source),
        Dataset(ds.features[te].copy(), ds.labels[te].copy(), ds.source),
    )
