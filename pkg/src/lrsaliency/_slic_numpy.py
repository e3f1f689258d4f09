"""Pure numpy/scipy fallback for the SLIC kernels.

Mirrors ``_slic_numba`` operation for operation; the expression trees are
kept identical so labels match the numba backend bit for bit.
"""

import numpy as np
from scipy import ndimage

_FOUR_CONNECTED = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=int)


def assign_pixels(lab, centers, window, spatial_scale, labels, dists):
    h, w = lab.shape[0], lab.shape[1]
    dists[:, :] = np.inf
    for c in range(centers.shape[0]):
        cl, ca, cb, cy, cx = centers[c]
        y0 = max(int(cy - window), 0)
        y1 = min(int(cy + window) + 1, h)
        x0 = max(int(cx - window), 0)
        x1 = min(int(cx + window) + 1, w)
        sub = lab[y0:y1, x0:x1]
        dl = sub[:, :, 0] - cl
        da = sub[:, :, 1] - ca
        db = sub[:, :, 2] - cb
        dy = (np.arange(y0, y1, dtype=np.float64) - cy)[:, None]
        dx = (np.arange(x0, x1, dtype=np.float64) - cx)[None, :]
        d = dl * dl + da * da + db * db + (dy * dy + dx * dx) * spatial_scale
        better = d < dists[y0:y1, x0:x1]
        dists[y0:y1, x0:x1][better] = d[better]
        labels[y0:y1, x0:x1][better] = c


def update_centers(lab, labels, centers):
    k = centers.shape[0]
    flat = labels.ravel()
    counts = np.bincount(flat, minlength=k)
    h, w = labels.shape
    ys, xs = np.indices((h, w))
    acc = np.empty((k, 5), dtype=np.float64)
    acc[:, 0] = np.bincount(flat, weights=lab[:, :, 0].ravel(), minlength=k)
    acc[:, 1] = np.bincount(flat, weights=lab[:, :, 1].ravel(), minlength=k)
    acc[:, 2] = np.bincount(flat, weights=lab[:, :, 2].ravel(), minlength=k)
    acc[:, 3] = np.bincount(flat, weights=ys.ravel().astype(np.float64), minlength=k)
    acc[:, 4] = np.bincount(flat, weights=xs.ravel().astype(np.float64), minlength=k)
    nonzero = counts > 0
    centers[nonzero] = acc[nonzero] / counts[nonzero, None]
    return counts


def enforce_connectivity(labels, min_size):
    h, w = labels.shape
    # Component map over the whole field: connected-components per label value.
    comp = np.full((h, w), -1, dtype=np.int64)
    n_comp = 0
    for lbl in np.unique(labels):
        mask = labels == lbl
        labeled, count = ndimage.label(mask, structure=_FOUR_CONNECTED)
        comp[mask] = labeled[mask] + n_comp - 1
        n_comp += count

    flat = comp.ravel()
    sort_idx = np.argsort(flat, kind="stable")
    bounds = np.searchsorted(flat[sort_idx], np.arange(n_comp + 1))
    # Stable sort keeps raster order within each component, so the first
    # entry of each group is the component's discovery pixel.
    first_index = sort_idx[bounds[:-1]]
    order = np.argsort(first_index, kind="stable")

    out = np.full(h * w, -1, dtype=np.int32)
    current = 0
    for cid in order:
        fy, fx = divmod(int(first_index[cid]), w)
        if fx > 0:
            adjacent = int(out[fy * w + fx - 1])
        elif fy > 0:
            adjacent = int(out[(fy - 1) * w + fx])
        else:
            adjacent = -1
        pixels = sort_idx[bounds[cid]:bounds[cid + 1]]
        if pixels.size < min_size and adjacent >= 0:
            out[pixels] = adjacent
        else:
            out[pixels] = current
            current += 1
    return out.reshape(h, w), current
