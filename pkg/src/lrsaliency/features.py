"""Per-superpixel descriptors and high-level priors.

Each region gets a 53-dim column: 5 color statistics (R, G, B, hue,
saturation), 12 oriented second-derivative-of-Gaussian responses
(4 orientations x 3 scales) standing in for a steerable pyramid, and 36
Gabor magnitudes (12 orientations x 3 wavelengths, even/odd quadrature
pairs). Responses are averaged over the region's pixels and every
dimension is min-max normalized across the image's regions.

The prior vector multiplies feature columns before decomposition:
location (Gaussian falloff from the image center), contrast (mean feature
distance to the other regions) and background (dissimilarity to border
regions), floored at 0.1 so no column is annihilated.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import fft as sfft

from ._util import EPS_RANGE, minmax01
from .errors import InvalidInputError
from .superpixel import SuperpixelMap, as_float_rgb

STEERABLE_ORIENTATIONS = (0.0, np.pi / 4, np.pi / 2, 3 * np.pi / 4)
STEERABLE_SCALES = (1.0, 2.0, 4.0)
GABOR_ORIENTATIONS = tuple(k * np.pi / 12 for k in range(12))
GABOR_WAVELENGTHS = (2.0, 4.0, 8.0)
GABOR_ASPECT = 0.5
LOCATION_SIGMA = 0.25
SIMILARITY_SIGMA_SQ = 0.05
PRIOR_FLOOR = 0.1


@dataclass(frozen=True)
class FeatureMatrix:
    """D x N matrix of per-region descriptors, entries in [0, 1].

    ``normalization`` records the pre-scaling (min, max) per dimension.
    """

    values: np.ndarray
    dim_names: tuple
    normalization: np.ndarray


@dataclass(frozen=True)
class PriorVector:
    """Per-region prior in [0, 1]; the factor maps kept for diagnostics."""

    values: np.ndarray
    components: dict


def _second_derivative_of_gaussian(theta: float, sigma: float) -> np.ndarray:
    radius = int(np.ceil(3.0 * sigma))
    y, x = np.mgrid[-radius:radius + 1, -radius:radius + 1].astype(np.float64)
    u = x * np.cos(theta) + y * np.sin(theta)
    v = -x * np.sin(theta) + y * np.cos(theta)
    envelope = np.exp(-(u * u + v * v) / (2.0 * sigma * sigma))
    kernel = (u * u / (sigma * sigma) - 1.0) * envelope
    kernel -= kernel.mean()
    return kernel / np.abs(kernel).sum()


def _gabor_pair(theta: float, wavelength: float):
    sigma_x = 0.56 * wavelength
    sigma_y = sigma_x / GABOR_ASPECT
    radius = int(np.ceil(3.0 * sigma_y))
    y, x = np.mgrid[-radius:radius + 1, -radius:radius + 1].astype(np.float64)
    u = x * np.cos(theta) + y * np.sin(theta)
    v = -x * np.sin(theta) + y * np.cos(theta)
    envelope = np.exp(-0.5 * (u * u / sigma_x**2 + v * v / sigma_y**2))
    even = envelope * np.cos(2.0 * np.pi * u / wavelength)
    odd = envelope * np.sin(2.0 * np.pi * u / wavelength)
    even -= envelope * even.sum() / envelope.sum()  # kill DC response
    scale = np.abs(even).sum()
    return even / scale, odd / scale


@lru_cache(maxsize=1)
def _filter_banks():
    steerable = [
        (f"steer_o{int(round(np.degrees(t)))}_s{s:g}", _second_derivative_of_gaussian(t, s))
        for s in STEERABLE_SCALES
        for t in STEERABLE_ORIENTATIONS
    ]
    gabor = [
        (f"gabor_o{int(round(np.degrees(t)))}_w{w:g}", _gabor_pair(t, w))
        for w in GABOR_WAVELENGTHS
        for t in GABOR_ORIENTATIONS
    ]
    return steerable, gabor


def _convolve_bank(image: np.ndarray, kernels: list) -> list:
    """'same' convolution of one image with many kernels, sharing the
    image FFT. Edge-replicate padding, so a constant image produces
    constant responses (no fake borders)."""
    h, w = image.shape
    pad = max(max(k.shape) for k in kernels) // 2
    padded = np.pad(image, pad, mode="edge")
    ph, pw = padded.shape
    kh = max(k.shape[0] for k in kernels)
    kw = max(k.shape[1] for k in kernels)
    shape = (sfft.next_fast_len(ph + kh - 1), sfft.next_fast_len(pw + kw - 1))
    image_f = sfft.rfft2(padded, shape)
    out = []
    for kernel in kernels:
        full = sfft.irfft2(image_f * sfft.rfft2(kernel, shape), shape)
        oy = (kernel.shape[0] - 1) // 2 + pad
        ox = (kernel.shape[1] - 1) // 2 + pad
        out.append(full[oy:oy + h, ox:ox + w])
    return out


def _hue_saturation(rgb: np.ndarray):
    v = rgb.max(axis=2)
    lo = rgb.min(axis=2)
    chroma = v - lo
    sat = np.where(v > 0, chroma / np.where(v > 0, v, 1.0), 0.0)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    safe = np.where(chroma > 0, chroma, 1.0)
    hue = np.where(v == r, ((g - b) / safe) % 6.0, 0.0)
    hue = np.where((v == g) & (v != r), (b - r) / safe + 2.0, hue)
    hue = np.where((v == b) & (v != r) & (v != g), (r - g) / safe + 4.0, hue)
    hue = np.where(chroma > 0, hue / 6.0, 0.0)
    return hue, sat


def _region_means(stack: list, labels: np.ndarray, n: int) -> np.ndarray:
    flat = labels.ravel()
    counts = np.bincount(flat, minlength=n).astype(np.float64)
    rows = [np.bincount(flat, weights=plane.ravel(), minlength=n) / counts for plane in stack]
    return np.stack(rows, axis=0)


def extract_features(image: np.ndarray, spmap: SuperpixelMap) -> FeatureMatrix:
    """Build the 53 x N descriptor matrix for a segmented image."""
    rgb = as_float_rgb(image)
    if rgb.shape[:2] != spmap.shape:
        raise InvalidInputError("image and superpixel map shapes differ")

    hue, sat = _hue_saturation(rgb)
    planes = [rgb[..., 0], rgb[..., 1], rgb[..., 2], hue, sat]
    names = ["color_r", "color_g", "color_b", "color_hue", "color_sat"]

    luminance = 0.299 * rgb[..., 0] + 0.587 * rgb[..., 1] + 0.114 * rgb[..., 2]
    steerable, gabor = _filter_banks()

    responses = _convolve_bank(luminance, [k for _, k in steerable])
    for (name, _), resp in zip(steerable, responses):
        planes.append(np.abs(resp))
        names.append(name)

    pair_kernels = []
    for _, (even, odd) in gabor:
        pair_kernels.extend([even, odd])
    pair_responses = _convolve_bank(luminance, pair_kernels)
    for i, (name, _) in enumerate(gabor):
        even_r = pair_responses[2 * i]
        odd_r = pair_responses[2 * i + 1]
        planes.append(np.sqrt(even_r * even_r + odd_r * odd_r))
        names.append(name)

    raw = _region_means(planes, spmap.labels, spmap.region_count)
    lo = raw.min(axis=1)
    hi = raw.max(axis=1)
    span = hi - lo
    scaled = (raw - lo[:, None]) / np.where(span > EPS_RANGE, span, 1.0)[:, None]
    scaled[span <= EPS_RANGE, :] = 0.0
    if not np.isfinite(scaled).all():
        raise InvalidInputError("feature extraction produced non-finite values")
    return FeatureMatrix(values=scaled, dim_names=tuple(names),
                         normalization=np.stack([lo, hi], axis=1))


def compute_priors(image: np.ndarray, spmap: SuperpixelMap, features: FeatureMatrix) -> PriorVector:
    """Location, contrast and background priors combined multiplicatively."""
    rgb = as_float_rgb(image)
    if rgb.shape[:2] != spmap.shape:
        raise InvalidInputError("image and superpixel map shapes differ")
    n = spmap.region_count
    if features.values.shape[1] != n:
        raise InvalidInputError("feature matrix does not match region count")
    h, w = spmap.shape

    centroids = np.array([px.mean(axis=0) for px in spmap.region_pixels])
    # Pixel-center convention: a region symmetric about the image center
    # has distance exactly 0.
    dy = (centroids[:, 0] + 0.5) / h - 0.5
    dx = (centroids[:, 1] + 0.5) / w - 0.5
    location = np.exp(-(dx * dx + dy * dy) / (2.0 * LOCATION_SIGMA**2))

    f = features.values
    sq = np.sum(f * f, axis=0)
    dist_sq = np.maximum(sq[:, None] + sq[None, :] - 2.0 * (f.T @ f), 0.0)
    dist = np.sqrt(dist_sq)
    contrast = minmax01(dist.sum(axis=1) / max(n - 1, 1))

    color = f[:5]
    border_cols = color[:, sorted(spmap.boundary_regions)]
    diff = color[:, :, None] - border_cols[:, None, :]
    sim = np.exp(-np.sum(diff * diff, axis=0) / (2.0 * SIMILARITY_SIGMA_SQ)).mean(axis=1)
    background = 1.0 - minmax01(sim)

    combined = minmax01(location * contrast * background)
    values = np.maximum(combined, PRIOR_FLOOR)
    return PriorVector(values=values, components={
        "location": location,
        "contrast": contrast,
        "background": background,
    })


def apply_priors(features: FeatureMatrix, priors) -> FeatureMatrix:
    """Scale column j by P_j (the elementwise product F . P)."""
    p = np.asarray(getattr(priors, "values", priors), dtype=np.float64)
    if p.ndim != 1 or p.shape[0] != features.values.shape[1]:
        raise InvalidInputError("prior length does not match region count")
    return FeatureMatrix(values=features.values * p[None, :],
                         dim_names=features.dim_names,
                         normalization=features.normalization)
