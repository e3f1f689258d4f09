import numpy as np
import pytest

from lrsaliency.errors import InvalidInputError
from lrsaliency.metrics import (aggregate, evaluate_pair, mae, overlap_ratio,
                                pr_roc, weighted_f)


def reference_weighted_f(pred, gt, beta_sq=0.3):
    """Straightforward nested-loop implementation of the weighted
    F-measure (independent of the production code path)."""
    h, w = gt.shape
    gt = gt.astype(bool)
    error = np.abs(pred - gt.astype(float))

    # nearest ground-truth pixel by brute force
    gt_pixels = [(y, x) for y in range(h) for x in range(w) if gt[y, x]]
    dist = np.zeros((h, w))
    nearest = {}
    for y in range(h):
        for x in range(w):
            best, best_d = None, np.inf
            for (gy, gx) in gt_pixels:
                d = (y - gy) ** 2 + (x - gx) ** 2
                if d < best_d:
                    best_d, best = d, (gy, gx)
            dist[y, x] = np.sqrt(best_d)
            nearest[(y, x)] = best

    moved = error.copy()
    for y in range(h):
        for x in range(w):
            if not gt[y, x]:
                moved[y, x] = error[nearest[(y, x)]]

    # 7x7 Gaussian, variance 5, zero padding
    radius = 3
    kernel = np.array([[np.exp(-(dy**2 + dx**2) / (2 * 5.0))
                        for dx in range(-radius, radius + 1)]
                       for dy in range(-radius, radius + 1)])
    kernel /= kernel.sum()
    smoothed = np.zeros_like(moved)
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for dy in range(-radius, radius + 1):
                for dx in range(-radius, radius + 1):
                    yy, xx = y + dy, x + dx
                    if 0 <= yy < h and 0 <= xx < w:
                        acc += moved[yy, xx] * kernel[dy + radius, dx + radius]
            smoothed[y, x] = acc

    combined = error.copy()
    for y in range(h):
        for x in range(w):
            if gt[y, x] and smoothed[y, x] < error[y, x]:
                combined[y, x] = smoothed[y, x]

    weighted = np.zeros_like(combined)
    for y in range(h):
        for x in range(w):
            b = 1.0 if gt[y, x] else 2.0 - np.exp(np.log(0.5) / 5.0 * dist[y, x])
            weighted[y, x] = combined[y, x] * b

    n_gt = gt.sum()
    tp_w = n_gt - weighted[gt].sum()
    fp_w = weighted[~gt].sum()
    recall = 1.0 - weighted[gt].mean()
    precision = tp_w / (tp_w + fp_w) if (tp_w + fp_w) > 0 else 0.0
    denom = beta_sq * precision + recall
    return 0.0 if denom <= 0 else (1 + beta_sq) * precision * recall / denom


def binary_mask(h, w, box):
    gt = np.zeros((h, w), dtype=np.uint8)
    y0, y1, x0, x1 = box
    gt[y0:y1, x0:x1] = 1
    return gt


class TestPrRoc:
    def test_perfect_prediction(self):
        gt = binary_mask(16, 16, (4, 10, 5, 12))
        pred = gt.astype(np.float64)
        pr, roc, auc = pr_roc(pred, gt)
        assert auc == pytest.approx(1.0)
        for k in range(1, 256):  # thresholds in (0, 1]
            recall, precision = pr[k]
            assert precision == pytest.approx(1.0)
            assert recall == pytest.approx(1.0)

    def test_inverted_prediction(self):
        gt = binary_mask(16, 16, (4, 10, 5, 12))
        _, _, auc = pr_roc(1.0 - gt, gt)
        assert auc == pytest.approx(0.0)

    def test_random_prediction_auc_half(self):
        rng = np.random.default_rng(99)
        gt = binary_mask(64, 64, (0, 32, 0, 64))  # balanced
        aucs = []
        for _ in range(100):
            pred = rng.random((64, 64))
            aucs.append(pr_roc(pred, gt)[2])
        assert 0.45 <= np.mean(aucs) <= 0.55

    def test_lowest_threshold_precision(self):
        rng = np.random.default_rng(5)
        gt = binary_mask(20, 20, (2, 9, 3, 12))
        pred = rng.uniform(0.01, 1.0, size=(20, 20))  # strictly positive
        pr, _, _ = pr_roc(pred, gt)
        assert pr[0][1] == pytest.approx(gt.sum() / gt.size)

    def test_monotone_rescaling_leaves_auc(self):
        rng = np.random.default_rng(7)
        gt = binary_mask(32, 32, (8, 24, 8, 20))
        for _ in range(10):
            pred = rng.random((32, 32))
            auc_base = pr_roc(pred, gt)[2]
            auc_sq = pr_roc(pred**2, gt)[2]
            assert abs(auc_base - auc_sq) <= 1e-12

    def test_invalid_inputs(self):
        gt = binary_mask(8, 8, (2, 5, 2, 5))
        with pytest.raises(InvalidInputError):
            pr_roc(np.zeros((8, 7)), gt)
        with pytest.raises(InvalidInputError):
            pr_roc(np.zeros((8, 8)), gt * 3)
        with pytest.raises(InvalidInputError):
            pr_roc(np.full((8, 8), 1.5), gt)


class TestWeightedF:
    def test_perfect(self):
        gt = binary_mask(12, 12, (3, 8, 4, 9))
        assert weighted_f(gt.astype(float), gt) == pytest.approx(1.0)

    def test_empty_prediction(self):
        gt = binary_mask(12, 12, (3, 8, 4, 9))
        assert weighted_f(np.zeros((12, 12)), gt) == pytest.approx(0.0)

    def test_matches_reference_implementation(self):
        gt = binary_mask(8, 8, (2, 6, 2, 6))
        pred = gt.astype(np.float64)
        pred[3, 3] = 0.0  # one mislabeled pixel
        assert weighted_f(pred, gt) == pytest.approx(
            reference_weighted_f(pred, gt), abs=1e-10)

    def test_matches_reference_on_graded_maps(self, rng):
        gt = binary_mask(8, 8, (1, 5, 3, 7))
        for _ in range(3):
            pred = rng.random((8, 8))
            assert weighted_f(pred, gt) == pytest.approx(
                reference_weighted_f(pred, gt), abs=1e-10)


class TestOverlapRatio:
    def test_identical_binary(self):
        gt = binary_mask(16, 16, (2, 9, 4, 12))
        assert overlap_ratio(gt.astype(float), gt) == pytest.approx(1.0)

    def test_disjoint_equal_masks(self):
        gt = binary_mask(16, 16, (0, 4, 0, 16))
        pred = binary_mask(16, 16, (8, 12, 0, 16)).astype(float)
        assert overlap_ratio(pred, gt) == pytest.approx(0.0)

    def test_half_overlapping_squares(self):
        gt = binary_mask(16, 32, (0, 16, 0, 16))
        pred = binary_mask(16, 32, (0, 16, 8, 24)).astype(float)
        assert overlap_ratio(pred, gt) == pytest.approx(1 / 3)


class TestMae:
    def test_identical(self):
        gt = binary_mask(10, 10, (2, 7, 3, 8))
        assert mae(gt.astype(float), gt) == 0.0

    def test_inverted(self):
        gt = binary_mask(10, 10, (2, 7, 3, 8))
        assert mae(1.0 - gt, gt) == pytest.approx(1.0)

    def test_constant_half(self):
        gt = binary_mask(10, 10, (0, 3, 0, 10))
        assert mae(np.full((10, 10), 0.5), gt) == pytest.approx(0.5)

    def test_symmetry_and_triangle(self, rng):
        for _ in range(10):
            a = rng.random((6, 6))
            b = rng.integers(0, 2, size=(6, 6))
            c = rng.integers(0, 2, size=(6, 6))
            assert mae(a, b) == pytest.approx(np.abs(a - b).mean())
            assert mae(a, b) <= np.abs(a - c).mean() + np.abs(
                c.astype(float) - b).mean() + 1e-12


def test_aggregate_means(rng):
    gt = binary_mask(16, 16, (4, 12, 4, 12))
    per, prs, rocs = [], [], []
    for _ in range(3):
        pred = rng.random((16, 16))
        scores, pr, roc = evaluate_pair(pred, gt, name="x")
        per.append(scores)
        prs.append(pr)
        rocs.append(roc)
    report = aggregate(per, prs, rocs)
    assert report.wf == pytest.approx(np.mean([s.wf for s in per]))
    assert len(report.pr_points) == 256
    assert len(report.per_image) == 3
