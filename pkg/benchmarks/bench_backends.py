#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure numpy fallback.

Times the three SLIC hot loops (assignment sweep, center update,
connectivity enforcement) and the end-to-end segment() call on synthetic
scenes. The numba path is warmed before timing so compilation is not
counted.

Usage:
    python3 benchmarks/bench_backends.py [--size HxW] [--regions N] [--repeats R]
"""

import argparse
import time

import numpy as np

from lrsaliency import _slic_numpy
from lrsaliency import superpixel as sp
from lrsaliency.backend import _NUMBA_IMPORTABLE
from lrsaliency.datasets import make_scene
from lrsaliency.superpixel import rgb_to_lab


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def build_inputs(shape, regions):
    rgb, _ = make_scene(20240711, shape=shape)
    lab = np.ascontiguousarray(rgb_to_lab(rgb.astype(np.float64) / 255.0))
    h, w = shape
    ny, row_cells = sp._grid_layout(h, w, regions)
    centers = np.zeros((sum(row_cells), 5))
    idx = 0
    for i in range(ny):
        for j in range(row_cells[i]):
            cy = (i + 0.5) * h / ny
            cx = (j + 0.5) * w / row_cells[i]
            iy, ix = min(int(cy), h - 1), min(int(cx), w - 1)
            centers[idx] = (lab[iy, ix, 0], lab[iy, ix, 1], lab[iy, ix, 2], cy, cx)
            idx += 1
    interval = np.sqrt(h * w / regions)
    return rgb, lab, centers, 2.0 * interval, (10.0 / interval) ** 2


def bench_kernels(kernels, lab, centers, window, scale, repeats):
    h, w = lab.shape[:2]
    labels = np.zeros((h, w), np.int32)
    dists = np.empty((h, w))
    c = centers.copy()
    t_assign = best_of(
        lambda: kernels.assign_pixels(lab, c, window, scale, labels, dists), repeats)
    t_update = best_of(lambda: kernels.update_centers(lab, labels, c), repeats)
    t_connect = best_of(lambda: kernels.enforce_connectivity(labels, 12), repeats)
    return t_assign, t_update, t_connect


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--size", default="300x400", help="image size as HxW")
    parser.add_argument("--regions", type=int, default=200)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    h, w = (int(v) for v in args.size.split("x"))

    rgb, lab, centers, window, scale = build_inputs((h, w), args.regions)

    backends = [("numpy", _slic_numpy)]
    if _NUMBA_IMPORTABLE:
        from lrsaliency import _slic_numba
        bench_kernels(_slic_numba, lab, centers, window, scale, 1)  # warm JIT
        backends.insert(0, ("numba", _slic_numba))
    else:
        print("numba not importable; timing the numpy fallback only")

    print(f"image {h}x{w}, {args.regions} regions, best of {args.repeats}\n")
    print(f"{'kernel':<22}" + "".join(f"{name:>12}" for name, _ in backends)
          + ("  speedup" if len(backends) == 2 else ""))
    rows = {}
    for name, module in backends:
        rows[name] = bench_kernels(module, lab, centers, window, scale, args.repeats)
    for i, kernel in enumerate(("assign_pixels", "update_centers", "enforce_connectivity")):
        cells = "".join(f"{rows[name][i] * 1e3:>10.2f}ms" for name, _ in backends)
        line = f"{kernel:<22}" + cells
        if len(backends) == 2:
            line += f"  {rows['numpy'][i] / rows['numba'][i]:>6.1f}x"
        print(line)

    seg_times = {}
    for name, module in backends:
        original = sp._kernels
        sp._kernels = module
        try:
            seg_times[name] = best_of(lambda: sp.segment(rgb, args.regions), args.repeats)
        finally:
            sp._kernels = original
    cells = "".join(f"{seg_times[name] * 1e3:>10.2f}ms" for name, _ in backends)
    line = f"{'segment (end-to-end)':<22}" + cells
    if len(backends) == 2:
        line += f"  {seg_times['numpy'] / seg_times['numba']:>6.1f}x"
    print(line)


if __name__ == "__main__":
    main()
