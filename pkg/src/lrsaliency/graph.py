"""Un-normalized graph Laplacian over the superpixel adjacency structure."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError


@dataclass(frozen=True)
class LaplacianMatrix:
    """G = Deg - W over superpixels; symmetric, PSD, rows sum to zero."""

    values: np.ndarray
    edge_weights: dict


def build_laplacian(features, spmap, sigma_sq: float = 0.05) -> LaplacianMatrix:
    """Build the Laplacian from feature affinity on the region graph.

    Edges connect spatially adjacent regions plus every pair of
    image-border regions. Weight is exp(-||f_i - f_j||^2 / (2 sigma_sq))
    on the normalized feature columns.
    """
    f = np.asarray(getattr(features, "values", features), dtype=np.float64)
    n = f.shape[1]
    if n < 2:
        raise InvalidInputError("need at least two regions to build a graph")
    if n != spmap.region_count:
        raise InvalidInputError("feature column count does not match region count")
    if sigma_sq <= 0:
        raise InvalidInputError("sigma_sq must be > 0")

    connected = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in spmap.adjacency[i]:
            connected[i, j] = True
    border = sorted(spmap.boundary_regions)
    for i in border:
        for j in border:
            if i != j:
                connected[i, j] = True

    sq_norms = np.sum(f * f, axis=0)
    dist_sq = sq_norms[:, None] + sq_norms[None, :] - 2.0 * (f.T @ f)
    np.maximum(dist_sq, 0.0, out=dist_sq)
    weights = np.where(connected, np.exp(-dist_sq / (2.0 * sigma_sq)), 0.0)
    weights = 0.5 * (weights + weights.T)  # exact symmetry
    np.fill_diagonal(weights, 0.0)

    laplacian = np.diag(weights.sum(axis=1)) - weights
    laplacian = 0.5 * (laplacian + laplacian.T)

    edge_weights = {}
    ii, jj = np.nonzero(weights)
    for i, j in zip(ii.tolist(), jj.tolist()):
        if i < j:
            edge_weights[(i, j)] = float(weights[i, j])
    return LaplacianMatrix(values=laplacian, edge_weights=edge_weights)
