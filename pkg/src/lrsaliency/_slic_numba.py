"""numba @njit kernels for the SLIC hot loops.

Signatures and float operation order match ``_slic_numpy`` exactly so the
two backends produce bit-identical labels (fastmath stays off).
"""

import numpy as np
from numba import njit

from .backend import JIT_OPTIONS


@njit(**JIT_OPTIONS)
def assign_pixels(lab, centers, window, spatial_scale, labels, dists):
    """One SLIC assignment sweep: nearest center within a 2S window."""
    h, w = lab.shape[0], lab.shape[1]
    dists[:, :] = np.inf
    for c in range(centers.shape[0]):
        cl = centers[c, 0]
        ca = centers[c, 1]
        cb = centers[c, 2]
        cy = centers[c, 3]
        cx = centers[c, 4]
        y0 = int(cy - window)
        y1 = int(cy + window) + 1
        x0 = int(cx - window)
        x1 = int(cx + window) + 1
        if y0 < 0:
            y0 = 0
        if x0 < 0:
            x0 = 0
        if y1 > h:
            y1 = h
        if x1 > w:
            x1 = w
        for y in range(y0, y1):
            dy = y - cy
            for x in range(x0, x1):
                dl = lab[y, x, 0] - cl
                da = lab[y, x, 1] - ca
                db = lab[y, x, 2] - cb
                dx = x - cx
                d = dl * dl + da * da + db * db + (dy * dy + dx * dx) * spatial_scale
                if d < dists[y, x]:
                    dists[y, x] = d
                    labels[y, x] = c


@njit(**JIT_OPTIONS)
def update_centers(lab, labels, centers):
    """Recompute centers as per-cluster means of (l, a, b, y, x)."""
    k = centers.shape[0]
    acc = np.zeros((k, 5), dtype=np.float64)
    counts = np.zeros(k, dtype=np.int64)
    h, w = labels.shape
    for y in range(h):
        for x in range(w):
            c = labels[y, x]
            acc[c, 0] += lab[y, x, 0]
            acc[c, 1] += lab[y, x, 1]
            acc[c, 2] += lab[y, x, 2]
            acc[c, 3] += y
            acc[c, 4] += x
            counts[c] += 1
    for c in range(k):
        if counts[c] > 0:
            for i in range(5):
                centers[c, i] = acc[c, i] / counts[c]
    return counts


@njit(**JIT_OPTIONS)
def enforce_connectivity(labels, min_size):
    """Relabel 4-connected components; merge small ones into the region
    already assigned to the left/top neighbor of their first raster pixel.

    Returns (new_labels, region_count). Every output region is one
    4-connected component.
    """
    h, w = labels.shape
    out = np.full((h, w), -1, dtype=np.int32)
    stack_y = np.empty(h * w, dtype=np.int32)
    stack_x = np.empty(h * w, dtype=np.int32)
    comp_y = np.empty(h * w, dtype=np.int32)
    comp_x = np.empty(h * w, dtype=np.int32)
    current = 0
    for y0 in range(h):
        for x0 in range(w):
            if out[y0, x0] != -1:
                continue
            lbl = labels[y0, x0]
            adjacent = -1
            if x0 > 0:
                adjacent = out[y0, x0 - 1]
            elif y0 > 0:
                adjacent = out[y0 - 1, x0]
            size = 0
            top = 0
            stack_y[top] = y0
            stack_x[top] = x0
            top += 1
            out[y0, x0] = current
            while top > 0:
                top -= 1
                y = stack_y[top]
                x = stack_x[top]
                comp_y[size] = y
                comp_x[size] = x
                size += 1
                if y > 0 and out[y - 1, x] == -1 and labels[y - 1, x] == lbl:
                    out[y - 1, x] = current
                    stack_y[top] = y - 1
                    stack_x[top] = x
                    top += 1
                if y + 1 < h and out[y + 1, x] == -1 and labels[y + 1, x] == lbl:
                    out[y + 1, x] = current
                    stack_y[top] = y + 1
                    stack_x[top] = x
                    top += 1
                if x > 0 and out[y, x - 1] == -1 and labels[y, x - 1] == lbl:
                    out[y, x - 1] = current
                    stack_y[top] = y
                    stack_x[top] = x - 1
                    top += 1
                if x + 1 < w and out[y, x + 1] == -1 and labels[y, x + 1] == lbl:
                    out[y, x + 1] = current
                    stack_y[top] = y
                    stack_x[top] = x + 1
                    top += 1
            if size < min_size and adjacent >= 0:
                for i in range(size):
                    out[comp_y[i], comp_x[i]] = adjacent
            else:
                current += 1
    return out, current
