"""Shared builders for randomized test instances."""

import numpy as np

from lrsaliency.features import FeatureMatrix


def random_partition(h, w, n, rng):
    """Random connected partition of an h x w grid into n regions
    (seeded BFS growth)."""
    labels = np.full((h, w), -1, dtype=np.int32)
    seeds = rng.choice(h * w, size=n, replace=False)
    frontier = []
    for k, s in enumerate(seeds):
        y, x = divmod(int(s), w)
        labels[y, x] = k
        frontier.append((y, x))
    while frontier:
        order = rng.permutation(len(frontier))
        next_frontier = []
        for idx in order:
            y, x = frontier[idx]
            for dy, dx in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                yy, xx = y + dy, x + dx
                if 0 <= yy < h and 0 <= xx < w and labels[yy, xx] == -1:
                    labels[yy, xx] = labels[y, x]
                    next_frontier.append((yy, xx))
        frontier = next_frontier
    return labels


def feature_matrix(values):
    values = np.asarray(values, dtype=np.float64)
    return FeatureMatrix(values=values,
                         dim_names=tuple(f"d{i}" for i in range(values.shape[0])),
                         normalization=np.zeros((values.shape[0], 2)))
