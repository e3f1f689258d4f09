"""Synthetic scenes with ground-truth masks.

Benchmark datasets are not downloaded; the bundled mini dataset under
``data/mini`` is generated here deterministically and committed. Scenes
are smooth textured backgrounds with one or two saturated, shade-ramped
objects placed off-center, so coarse maps leave genuinely ambiguous
regions for the refinement stage to resolve.
"""

from __future__ import annotations

import os

import numpy as np
from PIL import Image

MINI_SIZE = (120, 160)  # (H, W)
MINI_COUNT = 12
MINI_SEED = 20240711


def _smoothstep(x):
    x = np.clip(x, 0.0, 1.0)
    return x * x * (3.0 - 2.0 * x)


def make_scene(seed: int, shape=MINI_SIZE):
    """One synthetic scene. Returns (rgb uint8 (H,W,3), mask bool (H,W))."""
    rng = np.random.default_rng(seed)
    h, w = shape
    yy, xx = np.mgrid[0:h, 0:w].astype(np.float64)
    ny, nx = yy / h, xx / w

    # Background: muted two-color gradient plus low-frequency waves.
    c0 = rng.uniform(0.25, 0.55, size=3)
    c1 = c0 + rng.uniform(-0.18, 0.18, size=3)
    angle = rng.uniform(0, 2 * np.pi)
    t = (np.cos(angle) * nx + np.sin(angle) * ny + 1.0) / 2.0
    rgb = c0[None, None, :] * (1 - t[..., None]) + c1[None, None, :] * t[..., None]
    for _ in range(3):
        freq = rng.uniform(2.0, 5.0)
        phase = rng.uniform(0, 2 * np.pi)
        direction = rng.uniform(0, 2 * np.pi)
        wave = 0.03 * np.sin(2 * np.pi * freq * (np.cos(direction) * nx + np.sin(direction) * ny) + phase)
        rgb += wave[..., None] * rng.uniform(0.3, 1.0, size=3)[None, None, :]

    # Low-contrast distractor blobs near the border.
    for _ in range(rng.integers(1, 3)):
        by = rng.uniform(0.05, 0.95)
        bx = rng.choice([rng.uniform(0.02, 0.15), rng.uniform(0.85, 0.98)])
        br = rng.uniform(0.04, 0.09)
        d = np.sqrt((ny - by) ** 2 + (nx - bx) ** 2)
        blob = _smoothstep((br - d) / br)
        tint = rng.uniform(-0.15, 0.15, size=3)
        rgb += blob[..., None] * tint[None, None, :]

    # Salient objects: saturated hue, linear shade ramp across the body.
    mask = np.zeros((h, w), dtype=bool)
    n_objects = int(rng.integers(1, 3))
    base_hue = rng.uniform(0, 1)
    for i in range(n_objects):
        cy = rng.uniform(0.32, 0.68)
        cx = rng.uniform(0.3, 0.7)
        ry = rng.uniform(0.10, 0.18)
        rx = rng.uniform(0.12, 0.22)
        rot = rng.uniform(0, np.pi)
        u = (nx - cx) * np.cos(rot) + (ny - cy) * np.sin(rot)
        v = -(nx - cx) * np.sin(rot) + (ny - cy) * np.cos(rot)
        d = np.sqrt((u / rx) ** 2 + (v / ry) ** 2)
        alpha = _smoothstep((1.0 - d) / 0.12)

        hue = (base_hue + 0.45 + 0.1 * i) % 1.0
        color = _hsv_to_rgb(hue, rng.uniform(0.7, 0.95), rng.uniform(0.7, 0.95))
        ramp_dir = rng.uniform(0, 2 * np.pi)
        ramp = 0.3 * (np.cos(ramp_dir) * (nx - cx) + np.sin(ramp_dir) * (ny - cy)) / max(rx, ry)
        shaded = np.clip(color[None, None, :] * (1.0 + ramp[..., None]), 0.0, 1.0)
        rgb = rgb * (1 - alpha[..., None]) + shaded * alpha[..., None]
        mask |= alpha > 0.5

    rgb += rng.normal(0.0, 0.008, size=rgb.shape)
    rgb = np.clip(rgb, 0.0, 1.0)
    return (rgb * 255).round().astype(np.uint8), mask


def _hsv_to_rgb(hue, sat, val):
    i = int(hue * 6) % 6
    f = hue * 6 - int(hue * 6)
    p, q, t = val * (1 - sat), val * (1 - f * sat), val * (1 - (1 - f) * sat)
    return np.array([
        (val, t, p), (q, val, p), (p, val, t),
        (p, q, val), (t, p, val), (val, p, q),
    ][i])


def write_mini_dataset(root, count: int = MINI_COUNT, seed: int = MINI_SEED,
                       shape=MINI_SIZE) -> list:
    """Write the bundled dataset layout: images/*.png and gt/*.png."""
    image_dir = os.path.join(root, "images")
    gt_dir = os.path.join(root, "gt")
    os.makedirs(image_dir, exist_ok=True)
    os.makedirs(gt_dir, exist_ok=True)
    stems = []
    for i in range(count):
        rgb, mask = make_scene(seed + i, shape=shape)
        stem = f"scene_{i:02d}"
        Image.fromarray(rgb).save(os.path.join(image_dir, f"{stem}.png"))
        Image.fromarray((mask * 255).astype(np.uint8)).save(os.path.join(gt_dir, f"{stem}.png"))
        stems.append(stem)
    return stems


def ensure_mini_dataset(root) -> str:
    """Create the dataset under ``root`` unless it already exists."""
    image_dir = os.path.join(root, "images")
    expected = [f"scene_{i:02d}.png" for i in range(MINI_COUNT)]
    if os.path.isdir(image_dir) and all(
        os.path.exists(os.path.join(image_dir, name)) for name in expected
    ):
        return root
    write_mini_dataset(root)
    return root
