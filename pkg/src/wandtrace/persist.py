"""Text serialization for trained models.

Layout: a magic line, key/value header, algorithm-specific numeric blocks,
then a trailing CRC32 line covering every byte before it. Floats are
written with repr() so they survive a round trip bit for bit.
"""

from __future__ import annotations

import zlib
from pathlib import Path

import numpy as np

from .classify import GaussianNaiveBayes, LinearSVM
from .errors import ModelChecksumError, ModelFormatError

MAGIC = "DGRM1"
_ALGO_SVM = "svm"
_ALGO_NB = "nb"


def algorithm_tag(model) -> str:
    if isinstance(model, LinearSVM):
        return _ALGO_SVM
    if isinstance(model, GaussianNaiveBayes):
        return _ALGO_NB
    raise TypeError(f"unsupported model type {type(model).__name__}")


def _floats(values) -> str:
    return " ".join(repr(float(v)) for v in values)


def _parse_floats(text: str, expect: int, what: str) -> np.ndarray:
    parts = text.split()
    if len(parts) != expect:
        raise ModelFormatError(f"{what}: expected {expect} values, found {len(parts)}")
    try:
        return np.array([float(p) for p in parts])
    except ValueError as exc:
        raise ModelFormatError(f"{what}: {exc}") from exc


def save_model(model, path: str | Path) -> None:
    tag = algorithm_tag(model)
    lines = [
        MAGIC,
        f"algo {tag}",
        "classes " + " ".join(str(int(c)) for c in model.classes_),
        f"dim {model.n_features_in_}",
        "tie lowest-label",
    ]
    if tag == _ALGO_SVM:
        lines.append(f"params C={model.C!r} tol={model.tol!r} "
                     f"max_epochs={model.max_epochs} seed={model.seed}")
        for k in range(model.coef_.shape[0]):
            lines.append("weights " + repr(float(model.intercept_[k]))
                         + " " + _floats(model.coef_[k]))
    else:
        lines.append(f"params variance_floor={model.variance_floor!r}")
        for k, c in enumerate(model.classes_):
            lines.append(f"class {int(c)}")
            lines.append("logprior " + repr(float(model.class_log_prior_[k])))
            lines.append("mean " + _floats(model.theta_[k]))
            lines.append("var " + _floats(model.var_[k]))
    body = "\n".join(lines) + "\n"
    data = body.encode("utf-8")
    crc = zlib.crc32(data)
    with open(path, "wb") as fh:
        fh.write(data)
        fh.write(f"checksum {crc}\n".encode("utf-8"))


def _parse_params(line: str, what: str) -> dict[str, str]:
    if not line.startswith("params "):
        raise ModelFormatError(f"expected params line, got {line!r}")
    out = {}
    for item in line[len("params "):].split():
        if "=" not in item:
            raise ModelFormatError(f"malformed {what} params entry {item!r}")
        key, _, value = item.partition("=")
        out[key] = value
    return out


def load_model(path: str | Path):
    """Rebuild a classifier from save_model output, verifying the CRC."""
    raw = Path(path).read_bytes()
    marker = b"checksum "
    idx = raw.rfind(b"\n" + marker)
    if idx < 0:
        raise ModelChecksumError("missing checksum line (file truncated?)")
    body = raw[:idx + 1]
    tail = raw[idx + 1:].decode("utf-8", errors="replace").strip()
    try:
        stated = int(tail[len(marker):])
    except ValueError:
        raise ModelChecksumError(f"unreadable checksum line {tail!r}")
    actual = zlib.crc32(body)
    if stated != actual:
        raise ModelChecksumError(
            f"checksum mismatch: file says {stated}, content gives {actual}")

    lines = body.decode("utf-8").splitlines()
    if not lines or lines[0] != MAGIC:
        got = lines[0] if lines else ""
        raise ModelFormatError(f"bad magic {got!r}, expected {MAGIC!r}")

    def expect_prefix(i: int, prefix: str) -> str:
        if i >= len(lines) or not lines[i].startswith(prefix):
            found = lines[i] if i < len(lines) else "<eof>"
            raise ModelFormatError(f"expected {prefix!r} line, got {found!r}")
        return lines[i][len(prefix):]

    algo = expect_prefix(1, "algo ").strip()
    try:
        classes = np.array([int(t) for t in expect_prefix(2, "classes ").split()],
                           dtype=np.int64)
    except ValueError as exc:
        raise ModelFormatError(f"bad classes line: {exc}") from exc
    if len(classes) < 2 or not np.all(np.diff(classes) > 0):
        raise ModelFormatError("classes must be two or more, strictly increasing")
    try:
        dim = int(expect_prefix(3, "dim ").strip())
    except ValueError as exc:
        raise ModelFormatError(f"bad dim line: {exc}") from exc
    if dim < 1:
        raise ModelFormatError(f"dim must be positive, got {dim}")
    tie = expect_prefix(4, "tie ").strip()
    if tie != "lowest-label":
        raise ModelFormatError(f"unsupported tie rule {tie!r}")
    params = _parse_params(lines[5], algo)

    if algo == _ALGO_SVM:
        try:
            model = LinearSVM(C=float(params["C"]), tol=float(params["tol"]),
                              max_epochs=int(params["max_epochs"]),
                              seed=int(params["seed"]))
        except (KeyError, ValueError) as exc:
            raise ModelFormatError(f"bad svm params: {exc}") from exc
        n_problems = 1 if len(classes) == 2 else len(classes)
        rows = lines[6:]
        if len(rows) != n_problems:
            raise ModelFormatError(
                f"expected {n_problems} weights lines, found {len(rows)}")
        coef = np.empty((n_problems, dim))
        intercept = np.empty(n_problems)
        for k, row in enumerate(rows):
            if not row.startswith("weights "):
                raise ModelFormatError(f"expected weights line, got {row!r}")
            vals = _parse_floats(row[len("weights "):], dim + 1, "weights")
            intercept[k] = vals[0]
            coef[k] = vals[1:]
        model.classes_ = classes
        model.n_features_in_ = dim
        model.coef_ = coef
        model.intercept_ = intercept
        model.objective_curves_ = []
        return model

    if algo == _ALGO_NB:
        try:
            model = GaussianNaiveBayes(variance_floor=float(params["variance_floor"]))
        except (KeyError, ValueError) as exc:
            raise ModelFormatError(f"bad nb params: {exc}") from exc
        rows = lines[6:]
        if len(rows) != 4 * len(classes):
            raise ModelFormatError(
                f"expected {4 * len(classes)} class lines, found {len(rows)}")
        theta = np.empty((len(classes), dim))
        var = np.empty((len(classes), dim))
        prior = np.empty(len(classes))
        for k, c in enumerate(classes):
            base = 4 * k
            if rows[base] != f"class {int(c)}":
                raise ModelFormatError(
                    f"expected 'class {int(c)}' line, got {rows[base]!r}")
            if not rows[base + 1].startswith("logprior "):
                raise ModelFormatError(f"expected logprior line, got {rows[base + 1]!r}")
            prior[k] = _parse_floats(rows[base + 1][len("logprior "):], 1, "logprior")[0]
            if not rows[base + 2].startswith("mean "):
                raise ModelFormatError(f"expected mean line, got {rows[base + 2]!r}")
            theta[k] = _parse_floats(rows[base + 2][len("mean "):], dim, "mean")
            if not rows[base + 3].startswith("var "):
                raise ModelFormatError(f"expected var line, got {rows[base + 3]!r}")
            var[k] = _parse_floats(rows[base + 3][len("var "):], dim, "var")
        model.classes_ = classes
        model.n_features_in_ = dim
        model.theta_ = theta
        model.var_ = var
        model.class_log_prior_ = prior
        return model

    raise ModelFormatError(f"unknown algorithm tag {algo!r}")
