"""Binary PGM (P5, maxval 255) reading and writing.

A frame sequence on disk is a directory of zero-padded numbered files
(frame_000001.pgm, frame_000002.pgm, ...), optionally with extra metadata
files which are ignored by the reader.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .imaging import Frame

FRAME_NAME_FORMAT = "frame_{index:06d}.pgm"
_FRAME_NAME_RE = re.compile(r"^frame_(\d+)\.pgm$")


def write_pgm(path: str | Path, pixels: np.ndarray) -> None:
    """Write a 2-d uint8 array as a binary P5 file."""
    px = np.ascontiguousarray(np.asarray(pixels, dtype=np.uint8))
    if px.ndim != 2:
        raise ValueError(f"PGM payload must be 2-d, got shape {px.shape}")
    h, w = px.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(px.tobytes())


def read_pgm(path: str | Path) -> np.ndarray:
    """Read a binary P5 file into a (height, width) uint8 array."""
    data = Path(path).read_bytes()
    fields: list[bytes] = []
    pos = 0
    # Header: magic, width, height, maxval as whitespace-separated tokens,
    # with '#' comments running to end of line.
    while len(fields) < 4:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            eol = data.find(b"\n", pos)
            pos = len(data) if eol < 0 else eol + 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValueError(f"{path}: truncated PGM header")
        fields.append(data[start:pos])
    if fields[0] != b"P5":
        raise ValueError(f"{path}: not a binary PGM (magic {fields[0]!r})")
    w, h, maxval = (int(f) for f in fields[1:])
    if maxval != 255:
        raise ValueError(f"{path}: unsupported maxval {maxval}")
    pos += 1  # single whitespace byte after maxval
    raster = data[pos : pos + w * h]
    if len(raster) != w * h:
        raise ValueError(f"{path}: raster truncated ({len(raster)} of {w * h} bytes)")
    return np.frombuffer(raster, dtype=np.uint8).reshape(h, w)


def write_sequence(directory: str | Path, frames: list[Frame] | list[np.ndarray]) -> list[Path]:
    """Write frames as numbered PGM files; numbering restarts at 1."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, frame in enumerate(frames, start=1):
        pixels = frame.pixels if isinstance(frame, Frame) else frame
        p = directory / FRAME_NAME_FORMAT.format(index=i)
        write_pgm(p, pixels)
        paths.append(p)
    return paths


def read_sequence(directory: str | Path):
    """Yield Frames from the numbered PGM files of a directory, in order."""
    directory = Path(directory)
    numbered = []
    for p in directory.iterdir():
        m = _FRAME_NAME_RE.match(p.name)
        if m:
            numbered.append((int(m.group(1)), p))
    for index, p in sorted(numbered):
        yield Frame(read_pgm(p), index=index)
