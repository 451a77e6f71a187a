"""Synthetic gesture generator: a bright moving disc on a noisy background.

Stands in for the IR camera during tests and demos. A GestureScript is a
polyline with sampling and rendering parameters; rendering it yields the
frame sequence a wand tip would produce, deterministically per seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BlobOutOfBoundsError, UnsupportedLetterError
from .imaging import Frame
from .preprocess import PatternImage
from .trace import TraceConfig

DEFAULT_SAMPLES_PER_SEGMENT = 8
DEFAULT_BLOB_RADIUS = 6.0
DEFAULT_INTENSITY = 255
DEFAULT_NOISE_MAX = 30
DEFAULT_JITTER_SIGMA = 1.0

# Polyline templates in [0, 1] x [0, 1]; y grows downward. Every template
# runs from (0, 0.5) (start zone) to (1, 0.5) (end zone).
_A_TEMPLATE = (
    (0.0, 0.5),
    (0.10, 0.88),
    (0.45, 0.08),
    (0.80, 0.88),
    (0.655, 0.52),
    (0.245, 0.52),
    (1.0, 0.5),
)


def _c_template() -> tuple[tuple[float, float], ...]:
    # 12-point arc open to the right, drawn top to bottom.
    cx, cy, r = 0.45, 0.5, 0.38
    pts = [(0.0, 0.5)]
    for k in range(12):
        theta = math.radians(-55.0 - k * (250.0 / 11.0))
        pts.append((cx + r * math.cos(theta), cy + r * math.sin(theta)))
    pts.append((1.0, 0.5))
    return tuple(pts)


_TEMPLATES = {"A": _A_TEMPLATE, "C": _c_template()}


@dataclass(frozen=True)
class GestureScript:
    waypoints: tuple[tuple[float, float], ...]
    samples_per_segment: int = DEFAULT_SAMPLES_PER_SEGMENT
    blob_radius: float = DEFAULT_BLOB_RADIUS
    blob_intensity: int = DEFAULT_INTENSITY
    background_noise_max: int = DEFAULT_NOISE_MAX
    jitter_sigma: float = DEFAULT_JITTER_SIGMA
    seed: int = 0

    def __post_init__(self):
        if len(self.waypoints) < 2:
            raise ValueError("a script needs at least two waypoints")
        if self.samples_per_segment < 1:
            raise ValueError("samples_per_segment must be >= 1")
        if self.blob_radius <= 0:
            raise ValueError("blob_radius must be positive")
        if not 0 <= self.blob_intensity <= 255:
            raise ValueError("blob_intensity must be in 0-255")
        if not 0 <= self.background_noise_max <= 255:
            raise ValueError("background_noise_max must be in 0-255")
        if self.jitter_sigma < 0:
            raise ValueError("jitter_sigma must be >= 0")
        object.__setattr__(self, "waypoints",
                           tuple((float(x), float(y)) for x, y in self.waypoints))


def letter_path(letter: str, config: TraceConfig, width: int, height: int,
                **overrides) -> GestureScript:
    """Template polyline for a letter, mapped between the trigger zones.

    Template x runs along the start-to-end axis, template y across it,
    so the script starts at the start-zone center and ends at the
    end-zone center whatever the zone geometry.
    """
    template = _TEMPLATES.get(letter.upper())
    if template is None:
        raise UnsupportedLetterError(
            f"no template for {letter!r}; available: {sorted(_TEMPLATES)}")
    sx, sy = config.start_zone.center
    ex, ey = config.end_zone.center
    ux, uy = ex - sx, ey - sy
    length = math.hypot(ux, uy)
    nx, ny = -uy / length, ux / length
    v_span = 0.75 * length
    waypoints = []
    for tx, ty in template:
        off = (ty - 0.5) * v_span
        waypoints.append((sx + tx * ux + off * nx, sy + tx * uy + off * ny))
    script = GestureScript(waypoints=tuple(waypoints), **overrides)
    margin = script.blob_radius
    for x, y in script.waypoints:
        if not (margin <= x <= width - 1 - margin
                and margin <= y <= height - 1 - margin):
            raise ValueError(
                f"letter {letter!r} does not fit a {width}x{height} frame "
                f"with these zones (waypoint ({x:.1f}, {y:.1f}))")
    return script


def _base_points(script: GestureScript) -> np.ndarray:
    pts = [script.waypoints[0]]
    for (x0, y0), (x1, y1) in zip(script.waypoints, script.waypoints[1:]):
        for k in range(1, script.samples_per_segment + 1):
            t = k / script.samples_per_segment
            pts.append((x0 + t * (x1 - x0), y0 + t * (y1 - y0)))
    return np.asarray(pts)


def _jittered_points(script: GestureScript,
                     rng: np.random.Generator) -> np.ndarray:
    base = _base_points(script)
    return base + rng.normal(0.0, script.jitter_sigma, size=base.shape)


def sample_points(script: GestureScript) -> np.ndarray:
    """Jittered (n, 2) path samples, deterministic per script seed."""
    return _jittered_points(script, np.random.default_rng(script.seed))


def stamp_disc(pixels: np.ndarray, cx: float, cy: float, radius: float,
               value: int) -> None:
    """Set every pixel whose center lies within radius of (cx, cy)."""
    h, w = pixels.shape
    x0 = max(0, int(math.floor(cx - radius)))
    x1 = min(w - 1, int(math.ceil(cx + radius)))
    y0 = max(0, int(math.floor(cy - radius)))
    y1 = min(h - 1, int(math.ceil(cy + radius)))
    if x0 > x1 or y0 > y1:
        return
    ys, xs = np.mgrid[y0:y1 + 1, x0:x1 + 1]
    inside = (xs - cx) ** 2 + (ys - cy) ** 2 <= radius * radius
    pixels[y0:y1 + 1, x0:x1 + 1][inside] = value


def _check_center(x: float, y: float, width: int, height: int, index: int):
    if not (0 <= x <= width - 1 and 0 <= y <= height - 1):
        raise BlobOutOfBoundsError(
            f"frame {index}: blob center ({x:.2f}, {y:.2f}) outside "
            f"{width}x{height}")


def render_sequence(script: GestureScript, width: int,
                    height: int) -> list[Frame]:
    """One frame per sampled path point: noise floor plus the wand disc."""
    rng = np.random.default_rng(script.seed)
    points = _jittered_points(script, rng)
    frames = []
    for i, (x, y) in enumerate(points, start=1):
        _check_center(x, y, width, height, i)
        pixels = rng.integers(0, script.background_noise_max + 1,
                              size=(height, width)).astype(np.uint8)
        stamp_disc(pixels, x, y, script.blob_radius, script.blob_intensity)
        frames.append(Frame(pixels=pixels, index=i))
    return frames


def rasterize_script(script: GestureScript, width: int,
                     height: int) -> PatternImage:
    """Noise-free union of the wand discs along the sampled path.

    This is the pattern the tracer would accumulate from a rendering of
    the same script, minus background noise and bridging, so it serves as
    cheap training material for the classifiers.
    """
    points = sample_points(script)
    pixels = np.zeros((height, width), dtype=np.uint8)
    for i, (x, y) in enumerate(points, start=1):
        _check_center(x, y, width, height, i)
        stamp_disc(pixels, x, y, script.blob_radius, script.blob_intensity)
    return PatternImage(pixels)


def render_pointer_frame(x: float, y: float, width: int, height: int,
                         index: int, radius: float = 6.0) -> Frame:
    """Single noise-free frame with a full-intensity disc at (x, y)."""
    _check_center(x, y, width, height, index)
    pixels = np.zeros((height, width), dtype=np.uint8)
    stamp_disc(pixels, x, y, radius, 255)
    return Frame(pixels=pixels, index=index)


def format_script(script: GestureScript) -> str:
    """Key=value header, then one "x y" line per waypoint."""
    lines = [
        f"samples_per_segment={script.samples_per_segment}",
        f"blob_radius={script.blob_radius!r}",
        f"blob_intensity={script.blob_intensity}",
        f"background_noise_max={script.background_noise_max}",
        f"jitter_sigma={script.jitter_sigma!r}",
        f"seed={script.seed}",
    ]
    lines += [f"{x!r} {y!r}" for x, y in script.waypoints]
    return "\n".join(lines) + "\n"


def parse_script(text: str) -> GestureScript:
    header: dict[str, str] = {}
    waypoints = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" in line:
            key, _, value = line.partition("=")
            header[key.strip()] = value.strip()
        else:
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"bad waypoint line {raw!r}")
            waypoints.append((float(parts[0]), float(parts[1])))
    return GestureScript(
        waypoints=tuple(waypoints),
        samples_per_segment=int(header.get("samples_per_segment",
                                           DEFAULT_SAMPLES_PER_SEGMENT)),
        blob_radius=float(header.get("blob_radius", DEFAULT_BLOB_RADIUS)),
        blob_intensity=int(header.get("blob_intensity", DEFAULT_INTENSITY)),
        background_noise_max=int(header.get("background_noise_max",
                                            DEFAULT_NOISE_MAX)),
        jitter_sigma=float(header.get("jitter_sigma", DEFAULT_JITTER_SIGMA)),
        seed=int(header.get("seed", 0)),
    )
