"""Per-image learned refinement of the coarse saliency map.

Confident regions (score above tau2 or below tau1) keep their coarse
scores and anchor a weighted ridge projection from raw features to a
2-dim label space; ambiguous ("tough") regions get propagated labels from
their neighbors and are re-scored by the learned projection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from ._util import minmax01
from .errors import DegenerateCoarseMapError, InvalidInputError, NumericError
from .features import FeatureMatrix
from .saliency import SaliencyMap
from .superpixel import SuperpixelMap

TOUGH_WEIGHT = 0.5
NEGATIVE_WEIGHT = 1.0


@dataclass
class SamplePartition:
    """Disjoint positive / negative / tough split of all regions.

    ``labels`` holds one 2-vector per region: [1, 0] for positives,
    [0, 1] for negatives, [s, 1-s] for toughs (s = coarse score until
    :func:`tough_labels` replaces it with the propagated value).
    ``weights`` are 1 for negatives, N_n/N_p for positives, 0.5 for toughs.
    """

    positives: np.ndarray
    negatives: np.ndarray
    toughs: np.ndarray
    tau1: float
    tau2: float
    labels: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True)
class RefinementModel:
    """D x 2 projection from features to (saliency, non-saliency)."""

    projection: np.ndarray
    ridge_lambda: float


def partition_samples(coarse: SaliencyMap, tau2_factor: float) -> SamplePartition:
    """Split regions by coarse score: tau1 = mean, tau2 = factor * tau1
    clamped to 0.95 * max so the positive set is never empty.

    Raises DegenerateCoarseMapError when all scores are equal.
    """
    scores = np.asarray(coarse.scores, dtype=np.float64)
    if tau2_factor <= 1:
        raise InvalidInputError("tau2_factor must be > 1")
    smax = scores.max()
    if smax - scores.min() <= 0:
        raise DegenerateCoarseMapError("coarse scores are constant")
    tau1 = float(scores.mean())
    tau2 = float(min(tau2_factor * tau1, 0.95 * smax))
    if tau2 <= tau1:
        tau2 = float(np.nextafter(tau1, np.inf))

    positives = np.flatnonzero(scores > tau2)
    negatives = np.flatnonzero(scores < tau1)
    toughs = np.flatnonzero((scores >= tau1) & (scores <= tau2))

    n = scores.shape[0]
    labels = np.empty((n, 2), dtype=np.float64)
    labels[positives] = (1.0, 0.0)
    labels[negatives] = (0.0, 1.0)
    labels[toughs, 0] = scores[toughs]
    labels[toughs, 1] = 1.0 - scores[toughs]

    weights = np.empty(n, dtype=np.float64)
    weights[negatives] = NEGATIVE_WEIGHT
    weights[positives] = negatives.size / positives.size
    weights[toughs] = TOUGH_WEIGHT
    return SamplePartition(positives=positives, negatives=negatives, toughs=toughs,
                           tau1=tau1, tau2=tau2, labels=labels, weights=weights)


def tough_labels(partition: SamplePartition, coarse: SaliencyMap,
                 spmap: SuperpixelMap) -> np.ndarray:
    """Pixel-count-weighted neighbor average of coarse scores, as
    [s, 1-s] label rows for each tough region."""
    scores = np.asarray(coarse.scores, dtype=np.float64)
    counts = spmap.pixel_counts.astype(np.float64)
    out = np.empty((partition.toughs.size, 2), dtype=np.float64)
    for row, j in enumerate(partition.toughs.tolist()):
        neighbors = sorted(spmap.adjacency[j])
        if not neighbors:
            raise RuntimeError(f"tough region {j} has no neighbors")
        c = counts[neighbors]
        propagated = float(np.dot(scores[neighbors], c) / c.sum())
        out[row] = (propagated, 1.0 - propagated)
    return out


def learn_projection(samples: np.ndarray, labels: np.ndarray,
                     weights: np.ndarray, ridge_lambda: float) -> RefinementModel:
    """Closed-form weighted ridge solution
    M = (I + lambda A^T W A)^{-1} (lambda A^T W Y)."""
    a = np.asarray(samples, dtype=np.float64)
    y = np.asarray(labels, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    if ridge_lambda <= 0:
        raise InvalidInputError("ridge_lambda must be > 0")
    if (w < 0).any():
        raise InvalidInputError("weights must be non-negative")
    if not (np.isfinite(a).all() and np.isfinite(y).all() and np.isfinite(w).all()):
        raise NumericError("non-finite inputs to projection learning")
    aw = a * w[:, None]
    system = np.eye(a.shape[1]) + ridge_lambda * (a.T @ aw)
    rhs = ridge_lambda * (aw.T @ y)
    try:
        projection = cho_solve(cho_factor(system, lower=True), rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"projection system not positive definite: {exc}") from exc
    return RefinementModel(projection=projection, ridge_lambda=float(ridge_lambda))


def refine(coarse: SaliencyMap, features: FeatureMatrix, spmap: SuperpixelMap,
           ridge_lambda: float = 10.0, tau2_factor: float = 3.0) -> SaliencyMap:
    """Re-score tough regions with the learned projection; confident
    regions keep their coarse scores. Falls back to the coarse map when
    the partition is degenerate."""
    scores = np.asarray(coarse.scores, dtype=np.float64)
    if features.values.shape[1] != spmap.region_count or scores.shape[0] != spmap.region_count:
        raise InvalidInputError("inconsistent refinement inputs")
    try:
        partition = partition_samples(coarse, tau2_factor)
    except DegenerateCoarseMapError:
        return SaliencyMap(scores=scores.copy(), stage="refined", fallback=True)

    if partition.toughs.size:
        partition.labels[partition.toughs] = tough_labels(partition, coarse, spmap)
    samples = features.values.T
    model = learn_projection(samples, partition.labels, partition.weights, ridge_lambda)

    refined = scores.copy()
    if partition.toughs.size:
        predicted = samples[partition.toughs] @ model.projection
        refined[partition.toughs] = np.clip(predicted[:, 0], 0.0, 1.0)
    return SaliencyMap(scores=minmax01(refined), stage="refined")
