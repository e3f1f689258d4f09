"""Coarse saliency read-out from the sparse component."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._util import minmax01
from .errors import InvalidInputError
from .superpixel import SuperpixelMap


@dataclass
class SaliencyMap:
    """Per-region scores in [0, 1] plus an optional rendered raster.

    ``fallback`` marks maps returned unchanged because refinement had no
    trainable signal.
    """

    scores: np.ndarray
    stage: str
    pixel_map: np.ndarray | None = None
    fallback: bool = False


def saliency_from_sparse(sparse: np.ndarray) -> SaliencyMap:
    """Column-wise l1 mass of the sparse part, min-max normalized."""
    s = np.asarray(getattr(sparse, "values", sparse), dtype=np.float64)
    if not np.isfinite(s).all():
        raise InvalidInputError("sparse matrix contains non-finite values")
    raw = np.abs(s).sum(axis=0)
    return SaliencyMap(scores=minmax01(raw), stage="coarse")


def render(scores: np.ndarray, spmap: SuperpixelMap) -> np.ndarray:
    """Paint each region with its score as an 8-bit grayscale raster."""
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 1 or scores.shape[0] != spmap.region_count:
        raise InvalidInputError("score length does not match region count")
    levels = np.rint(255.0 * scores).astype(np.uint8)
    return levels[spmap.labels]
