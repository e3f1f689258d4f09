"""SLIC over-segmentation and region adjacency.

Clusters pixels in CIELAB + position space (compactness m=10, 10 sweeps)
starting from a regular grid, then enforces 4-connectivity by merging
orphan components into the neighboring region discovered first. The
per-pixel loops dispatch to numba or numpy kernels via
:mod:`lrsaliency.backend`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .backend import ACTIVE_BACKEND
from .errors import InvalidInputError

if ACTIVE_BACKEND == "numba":
    from . import _slic_numba as _kernels
else:
    from . import _slic_numpy as _kernels

COMPACTNESS = 10.0
ITERATIONS = 10


@dataclass(frozen=True)
class SuperpixelMap:
    """Partition of an image into connected regions.

    labels: (H, W) int32, values in [0, region_count).
    region_pixels: per region, (n_k, 2) array of (row, col) coordinates.
    pixel_counts: per region pixel count |P_k|.
    adjacency: per region, frozenset of regions sharing a 4-connected
        pixel boundary.
    boundary_regions: regions touching the image border.
    """

    labels: np.ndarray
    region_count: int
    region_pixels: tuple = field(repr=False)
    pixel_counts: np.ndarray = field(repr=False)
    adjacency: tuple = field(repr=False)
    boundary_regions: frozenset = field(repr=False)

    @property
    def shape(self):
        return self.labels.shape

    @classmethod
    def from_labels(cls, labels: np.ndarray) -> "SuperpixelMap":
        """Derive counts, pixel lists, adjacency and border set from a
        label field. Labels must be a total partition 0..K-1."""
        labels = np.ascontiguousarray(labels, dtype=np.int32)
        if labels.ndim != 2 or labels.size == 0:
            raise InvalidInputError("labels must be a non-empty 2-D field")
        h, w = labels.shape
        n = int(labels.max()) + 1
        if labels.min() < 0:
            raise InvalidInputError("labels must be non-negative")
        counts = np.bincount(labels.ravel(), minlength=n)
        if (counts == 0).any():
            raise InvalidInputError("every region index must be non-empty")

        order = np.argsort(labels.ravel(), kind="stable")
        bounds = np.searchsorted(labels.ravel()[order], np.arange(n + 1))
        region_pixels = []
        for k in range(n):
            flat = order[bounds[k]:bounds[k + 1]]
            region_pixels.append(np.stack(np.divmod(flat, w), axis=1))

        neighbor_sets = [set() for _ in range(n)]
        a, b = labels[:, :-1], labels[:, 1:]
        pairs = np.stack([a[a != b], b[a != b]], axis=1)
        c, d = labels[:-1, :], labels[1:, :]
        pairs = np.concatenate([pairs, np.stack([c[c != d], d[c != d]], axis=1)])
        if pairs.size:
            lo = np.minimum(pairs[:, 0], pairs[:, 1])
            hi = np.maximum(pairs[:, 0], pairs[:, 1])
            for i, j in np.unique(np.stack([lo, hi], axis=1), axis=0).tolist():
                neighbor_sets[i].add(j)
                neighbor_sets[j].add(i)

        border = frozenset(
            np.unique(np.concatenate([labels[0], labels[-1], labels[:, 0], labels[:, -1]])).tolist()
        )
        return cls(
            labels=labels,
            region_count=n,
            region_pixels=tuple(region_pixels),
            pixel_counts=counts,
            adjacency=tuple(frozenset(s) for s in neighbor_sets),
            boundary_regions=border,
        )


def rgb_to_lab(rgb: np.ndarray) -> np.ndarray:
    """Vectorized sRGB -> CIELAB (D65), input floats in [0, 1]."""
    rgb = np.asarray(rgb, dtype=np.float64)
    linear = np.where(rgb > 0.04045, ((rgb + 0.055) / 1.055) ** 2.4, rgb / 12.92)
    m = np.array([
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ])
    xyz = linear @ m.T
    xyz /= np.array([0.95047, 1.0, 1.08883])
    f = np.where(xyz > 0.008856, np.cbrt(xyz), 7.787 * xyz + 16.0 / 116.0)
    lab = np.empty_like(xyz)
    lab[..., 0] = 116.0 * f[..., 1] - 16.0
    lab[..., 1] = 500.0 * (f[..., 0] - f[..., 1])
    lab[..., 2] = 200.0 * (f[..., 1] - f[..., 2])
    return lab


def as_float_rgb(image: np.ndarray) -> np.ndarray:
    """Validate an RGB raster and return it as float64 in [0, 1]."""
    image = np.asarray(image)
    if image.ndim != 3 or image.shape[2] != 3 or image.shape[0] < 1 or image.shape[1] < 1:
        raise InvalidInputError("expected an (H, W, 3) RGB raster")
    if image.dtype == np.uint8:
        return image.astype(np.float64) / 255.0
    image = image.astype(np.float64)
    if image.min() < 0 or image.max() > 1:
        raise InvalidInputError("float images must lie in [0, 1]")
    return image


def _grid_layout(h: int, w: int, k: int):
    """Row layout placing exactly k cells: ny rows, row i holding
    row_cells[i] columns."""
    ny = int(round(np.sqrt(k * h / w))) if w else 1
    ny = max(1, min(ny, k, h))
    ny = max(ny, -(-k // w))  # keep per-row cell count <= w
    base, extra = divmod(k, ny)
    return ny, [base + 1 if i < extra else base for i in range(ny)]


def _grid_labels(h: int, w: int, k: int) -> np.ndarray:
    ny, row_cells = _grid_layout(h, w, k)
    labels = np.empty((h, w), dtype=np.int32)
    ys = np.minimum((np.arange(h) * ny) // h, ny - 1)
    offsets = np.concatenate([[0], np.cumsum(row_cells)])
    xs = np.arange(w)
    for band in range(ny):
        nx = row_cells[band]
        cols = np.minimum((xs * nx) // w, nx - 1)
        labels[ys == band] = offsets[band] + cols
    return labels


def segment(image: np.ndarray, target_regions: int) -> SuperpixelMap:
    """Over-segment an RGB image into about ``target_regions`` regions.

    Deterministic: grid initialization, fixed iteration count, no RNG.
    Inputs with no usable color structure (where clustering collapses or
    shatters) fall back to the plain spatial grid partition.
    """
    rgb = as_float_rgb(image)
    h, w = rgb.shape[:2]
    if h * w < 2:
        raise InvalidInputError("image too small to segment")
    if target_regions < 2 or target_regions > h * w:
        raise InvalidInputError("target_regions must be in [2, H*W]")

    lab = np.ascontiguousarray(rgb_to_lab(rgb))
    ny, row_cells = _grid_layout(h, w, target_regions)
    centers = np.zeros((sum(row_cells), 5), dtype=np.float64)
    idx = 0
    for i in range(ny):
        for j in range(row_cells[i]):
            cy = (i + 0.5) * h / ny
            cx = (j + 0.5) * w / row_cells[i]
            iy, ix = min(int(cy), h - 1), min(int(cx), w - 1)
            centers[idx] = (lab[iy, ix, 0], lab[iy, ix, 1], lab[iy, ix, 2], cy, cx)
            idx += 1

    interval = np.sqrt(h * w / target_regions)
    spatial_scale = (COMPACTNESS / interval) ** 2
    window = 2.0 * interval
    labels = np.zeros((h, w), dtype=np.int32)
    dists = np.empty((h, w), dtype=np.float64)
    for _ in range(ITERATIONS):
        _kernels.assign_pixels(lab, centers, window, spatial_scale, labels, dists)
        _kernels.update_centers(lab, labels, centers)

    min_size = (h * w // target_regions) // 4
    final, count = _kernels.enforce_connectivity(labels, min_size)
    if not 0.7 * target_regions <= count <= 1.3 * target_regions:
        final = _grid_labels(h, w, target_regions)
    return SuperpixelMap.from_labels(final)


def adjacency_of(spmap: SuperpixelMap, region: int) -> set:
    """Regions sharing a 4-connected boundary with ``region``."""
    if not 0 <= region < spmap.region_count:
        raise InvalidInputError(f"region {region} out of range")
    return set(spmap.adjacency[region])
