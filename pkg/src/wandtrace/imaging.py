"""Frame representation, thresholding, and connected-component blob extraction.

Frames are grayscale uint8 images stored row-major. Blob extraction labels
a binary mask with union-find over horizontal runs of set pixels, which
keeps cost proportional to the lit area rather than the frame size (the
wand tip lights up ~100 pixels of a 320x240 frame).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MIN_FRAME_SIDE = 16
DEFAULT_THRESHOLD = 200
DEFAULT_CONNECTIVITY = 8
DEFAULT_MIN_AREA = 5


@dataclass(frozen=True)
class Frame:
    """One grayscale frame of the (real or synthetic) camera stream.

    pixels is a (height, width) uint8 array; index is a monotone frame
    counter assigned by the producer.
    """

    pixels: np.ndarray
    index: int = 0

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2:
            raise ValueError(f"frame pixels must be 2-d, got shape {px.shape}")
        h, w = px.shape
        if h < MIN_FRAME_SIDE or w < MIN_FRAME_SIDE:
            raise ValueError(f"frame must be at least {MIN_FRAME_SIDE}x{MIN_FRAME_SIDE}, got {w}x{h}")
        if px.dtype != np.uint8:
            if px.min() < 0 or px.max() > 255:
                raise ValueError("frame intensities must lie in [0, 255]")
            px = px.astype(np.uint8)
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class BitMask:
    """Binary image with the same dimensions as its source frame."""

    bits: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.bits, dtype=bool)
        if b.ndim != 2:
            raise ValueError(f"mask bits must be 2-d, got shape {b.shape}")
        object.__setattr__(self, "bits", b)

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    def count(self) -> int:
        return int(self.bits.sum())


@dataclass(frozen=True, slots=True)
class Blob:
    """One connected bright region of a mask.

    centroid is the unweighted mean of the pixel coordinates as (x, y);
    bbox is inclusive (x_min, y_min, x_max, y_max); pixels is the set of
    (x, y) coordinates belonging to the component.
    """

    area: int
    centroid: tuple[float, float]
    bbox: tuple[int, int, int, int]
    pixels: frozenset[tuple[int, int]] = field(repr=False)

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Pixel coordinates as (xs, ys) arrays, in no particular order."""
        xs, ys = zip(*self.pixels)
        return np.asarray(xs, dtype=np.intp), np.asarray(ys, dtype=np.intp)


def threshold(frame: Frame, t: int) -> BitMask:
    """Set a bit wherever the frame intensity is >= t.

    t is clamped to the representable range [0, 255]; threshold(frame, 0)
    therefore sets every bit and threshold(frame, 255) selects exactly the
    saturated pixels.
    """
    t = max(0, min(255, int(t)))
    return BitMask(frame.pixels >= t)


def find_blobs(mask: BitMask, connectivity: int = DEFAULT_CONNECTIVITY,
               min_area: int = DEFAULT_MIN_AREA) -> list[Blob]:
    """Return every connected component of the mask with area >= min_area.

    Components are ordered by descending area, ties broken by the (y_min,
    x_min) corner of the bounding box and then by the raster-first pixel,
    so the ordering depends only on mask content.

    Labeling is run-based union-find: maximal horizontal runs of set pixels
    are the atoms (their pixels are connected under either connectivity),
    and a run is merged with any run in the row above whose span it touches,
    where 8-connectivity widens "touches" by one pixel on each side. Unions
    keep the smaller run id as root, so a component's root is its raster-
    first run.
    """
    if connectivity not in (4, 8):
        raise ValueError(f"connectivity must be 4 or 8, got {connectivity}")
    if min_area < 1:
        raise ValueError(f"min_area must be >= 1, got {min_area}")

    nz_ys, nz_xs = mask.bits.nonzero()
    if len(nz_ys) == 0:
        return []
    ys = nz_ys.tolist()
    xs = nz_xs.tolist()

    parent: list[int] = []

    def find(a: int) -> int:
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    reach = 1 if connectivity == 8 else 0
    # Per run: (y, x_start, x_end, index of first pixel in raster order),
    # end exclusive.
    runs: list[tuple[int, int, int, int]] = []
    prev: list[tuple[int, int, int]] = []  # row above: (x_start, x_end, run id)
    cur: list[tuple[int, int, int]] = []
    prev_n = 0
    row_y = -2
    j = 0
    i = 0
    n = len(xs)
    n_runs = 0
    while i < n:
        y = ys[i]
        x0 = xs[i]
        first = i
        x1 = x0 + 1
        i += 1
        while i < n and ys[i] == y and xs[i] == x1:
            x1 += 1
            i += 1
        if y != row_y:
            prev = cur if y == row_y + 1 else []
            prev_n = len(prev)
            cur = []
            row_y = y
            j = 0
        rid = n_runs
        n_runs += 1
        parent.append(rid)
        # Runs in a row are separated by gaps, so both endpoints increase
        # monotonically and a single forward pointer can skip the runs above
        # that end before this one's reach.
        lo = x0 - reach
        while j < prev_n and prev[j][1] <= lo:
            j += 1
        k = j
        hi = x1 + reach
        ra = rid  # ra tracks the current root of this run's component
        while k < prev_n and prev[k][0] < hi:
            rb = find(prev[k][2])
            if rb != ra:
                if rb < ra:
                    parent[ra] = rb
                    ra = rb
                else:
                    parent[rb] = ra
            k += 1
        runs.append((y, x0, x1, first))
        cur.append((x0, x1, rid))

    # One pass over runs in id order folds each into its component's
    # accumulator: [area, sum_x, sum_y, x_min, x_max, y_min, y_max, pts].
    # Runs are visited in raster order, so a component's y extremes are its
    # first and latest run rows and its pixel list stays raster-ordered.
    # Most parents already point at a root, so chase chains lazily.
    all_pts = list(zip(xs, ys))
    acc: dict[int, list] = {}
    for rid in range(n_runs):
        r = parent[rid]
        if parent[r] != r:
            r = find(r)
        y, x0, x1, first = runs[rid]
        span = x1 - x0
        a = acc.get(r)
        if a is None:
            acc[r] = [span, (x0 + x1 - 1) * span // 2, y * span,
                      x0, x1 - 1, y, y, all_pts[first:first + span]]
        else:
            a[0] += span
            a[1] += (x0 + x1 - 1) * span // 2
            a[2] += y * span
            if x0 < a[3]:
                a[3] = x0
            if x1 - 1 > a[4]:
                a[4] = x1 - 1
            a[6] = y
            a[7] += all_pts[first:first + span]

    entries = []
    for area, sum_x, sum_y, x_min, x_max, y_min, y_max, pts in acc.values():
        if area < min_area:
            continue
        blob = Blob(
            area=area,
            centroid=(sum_x / area, sum_y / area),
            bbox=(x_min, y_min, x_max, y_max),
            pixels=frozenset(pts),
        )
        entries.append(((-area, y_min, x_min, pts[0][1], pts[0][0]), blob))
    entries.sort(key=lambda e: e[0])
    return [blob for _, blob in entries]


def primary_blob(blobs: list[Blob]) -> Blob | None:
    """Pick the blob to track: largest area, ties by smallest (y_min, x_min)."""
    if not blobs:
        return None
    return min(blobs, key=lambda b: (-b.area, b.bbox[1], b.bbox[0],
                                     min((y, x) for x, y in b.pixels)))
