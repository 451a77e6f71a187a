"""Pattern cleanup and conversion to 28x28 MNIST-style feature vectors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import EmptyPatternError
from .imaging import BitMask

TARGET_SIDE = 28
GLYPH_SIDE = 20
FEATURE_DIM = TARGET_SIDE * TARGET_SIDE


@dataclass(frozen=True, eq=False)
class PatternImage:
    """Grayscale image of an accumulated stroke (uint8, row-major)."""

    pixels: np.ndarray

    def __post_init__(self):
        p = self.pixels
        if not isinstance(p, np.ndarray) or p.ndim != 2 or p.dtype != np.uint8:
            raise ValueError("pattern pixels must be a 2-d uint8 array")
        p.setflags(write=False)

    def __eq__(self, other):
        if not isinstance(other, PatternImage):
            return NotImplemented
        return self.pixels.shape == other.pixels.shape and \
            np.array_equal(self.pixels, other.pixels)

    def __hash__(self):
        return hash((self.pixels.shape, self.pixels.tobytes()))

    @classmethod
    def from_mask(cls, mask: BitMask) -> "PatternImage":
        return cls((mask.bits.astype(np.uint8)) * 255)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


def denoise_median3(img: PatternImage) -> PatternImage:
    """3x3 median filter with edge replication at the borders."""
    filtered = ndimage.median_filter(img.pixels, size=3, mode="nearest")
    return PatternImage(filtered)


def bounding_box(img: PatternImage) -> tuple[int, int, int, int]:
    """Tight (x_min, y_min, x_max, y_max) around nonzero pixels, inclusive."""
    ys, xs = np.nonzero(img.pixels)
    if len(xs) == 0:
        raise EmptyPatternError("pattern has no nonzero pixels")
    return int(xs.min()), int(ys.min()), int(xs.max()), int(ys.max())


def _overlap_weights(n_out: int, n_in: int) -> np.ndarray:
    """Row-stochastic matrix averaging n_in samples down to n_out.

    Output cell i spans [i*n_in/n_out, (i+1)*n_in/n_out) in source
    coordinates; each source pixel contributes its covered fraction.
    """
    w = np.zeros((n_out, n_in))
    scale = n_in / n_out
    for i in range(n_out):
        lo = i * scale
        hi = (i + 1) * scale
        j0 = int(np.floor(lo))
        j1 = min(n_in, int(np.ceil(hi)))
        for j in range(j0, j1):
            w[i, j] = min(hi, j + 1) - max(lo, j)
    return w / scale


def _shrink_area(crop: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Area-average downsample; integer ratios reduce to exact block means."""
    in_h, in_w = crop.shape
    if in_h % out_h == 0 and in_w % out_w == 0:
        fy = in_h // out_h
        fx = in_w // out_w
        sums = crop.astype(np.int64).reshape(out_h, fy, out_w, fx).sum(axis=(1, 3))
        return sums / float(fy * fx)
    wy = _overlap_weights(out_h, in_h)
    wx = _overlap_weights(out_w, in_w)
    return wy @ crop.astype(np.float64) @ wx.T


def _enlarge_nearest(crop: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    in_h, in_w = crop.shape
    rows = np.minimum((np.arange(out_h) * in_h) // out_h, in_h - 1)
    cols = np.minimum((np.arange(out_w) * in_w) // out_w, in_w - 1)
    return crop.astype(np.float64)[np.ix_(rows, cols)]


def normalize_to_28(img: PatternImage) -> np.ndarray:
    """Crop, scale so the longest side is 20, center on a 28x28 canvas.

    Returns a flat float64 vector of 784 values in [0, 1]. Shrinking uses
    area averaging, enlarging nearest-neighbor, so the result depends only
    on the cropped content, never on where it sat in the frame.
    """
    x0, y0, x1, y1 = bounding_box(img)
    crop = img.pixels[y0:y1 + 1, x0:x1 + 1]
    in_h, in_w = crop.shape
    longest = max(in_h, in_w)

    if in_w >= in_h:
        out_w = GLYPH_SIDE
        out_h = max(1, int(round(in_h * GLYPH_SIDE / in_w)))
    else:
        out_h = GLYPH_SIDE
        out_w = max(1, int(round(in_w * GLYPH_SIDE / in_h)))

    if longest > GLYPH_SIDE:
        glyph = _shrink_area(crop, out_h, out_w)
    elif longest < GLYPH_SIDE:
        glyph = _enlarge_nearest(crop, out_h, out_w)
    else:
        glyph = crop.astype(np.float64)

    canvas = np.zeros((TARGET_SIDE, TARGET_SIDE))
    oy = (TARGET_SIDE - out_h) // 2
    ox = (TARGET_SIDE - out_w) // 2
    canvas[oy:oy + out_h, ox:ox + out_w] = glyph
    return canvas.reshape(FEATURE_DIM) / 255.0


class PatternFeaturizer(TransformerMixin, BaseEstimator):
    """Turns raw patterns into classifier-ready vectors.

    Stateless; fit only validates. transform accepts an iterable of
    PatternImage and returns an (n, 784) float64 array.
    """

    def __init__(self, denoise: bool = True):
        self.denoise = denoise

    def fit(self, X, y=None):
        self.n_features_in_ = FEATURE_DIM
        return self

    def transform(self, X) -> np.ndarray:
        rows = []
        for img in X:
            if not isinstance(img, PatternImage):
                raise TypeError(f"expected PatternImage, got {type(img).__name__}")
            if self.denoise:
                img = denoise_median3(img)
            rows.append(normalize_to_28(img))
        if not rows:
            return np.empty((0, FEATURE_DIM))
        return np.stack(rows)
