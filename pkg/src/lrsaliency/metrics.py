"""Saliency evaluation: PR and ROC curves, AUC, weighted F-measure,
overlap ratio and mean absolute error.

The reported PR/ROC point lists sample 256 thresholds (8-bit map
granularity). AUC, however, is computed on the full empirical ROC curve
over every distinct prediction value, which makes it exactly invariant
under strictly monotone rescalings of the prediction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import InvalidInputError

BETA_SQ = 0.3
WF_GAUSSIAN_SIZE = 7
WF_GAUSSIAN_VAR = 5.0
WF_DECAY = np.log(0.5) / 5.0
THRESHOLDS = np.arange(256) / 255.0


@dataclass
class ImageScores:
    name: str
    wf: float
    or_score: float
    auc: float
    mae: float


@dataclass
class EvaluationReport:
    """Dataset-level metrics: means over images plus per-threshold mean
    PR / ROC curves."""

    pr_points: list
    roc_points: list
    auc: float
    wf: float
    or_score: float
    mae: float
    per_image: list


def _validate_pair(pred: np.ndarray, gt: np.ndarray):
    pred = np.asarray(pred, dtype=np.float64)
    gt = np.asarray(gt)
    if pred.shape != gt.shape or pred.ndim != 2:
        raise InvalidInputError("prediction and ground truth shapes differ")
    if not np.isfinite(pred).all() or pred.min() < 0 or pred.max() > 1:
        raise InvalidInputError("prediction must lie in [0, 1]")
    unique = np.unique(gt)
    if not np.isin(unique, (0, 1)).all():
        raise InvalidInputError("ground truth must be strictly binary")
    return pred, gt.astype(bool)


def _counts_at(pred, gt, thresholds):
    """TP/FP counts for 'pred >= t' at each threshold, via sorted scores."""
    pos = np.sort(pred[gt])
    neg = np.sort(pred[~gt])
    tp = pos.size - np.searchsorted(pos, thresholds, side="left")
    fp = neg.size - np.searchsorted(neg, thresholds, side="left")
    return tp.astype(np.float64), fp.astype(np.float64), pos.size, neg.size


def pr_roc(pred: np.ndarray, gt: np.ndarray):
    """PR and ROC point lists over 256 thresholds plus exact AUC.

    Returns (pr_points, roc_points, auc) where pr_points[k] = (recall,
    precision) and roc_points[k] = (fpr, tpr) at threshold k/255.
    """
    pred, gt = _validate_pair(pred, gt)
    tp, fp, n_pos, n_neg = _counts_at(pred, gt, THRESHOLDS)

    predicted = tp + fp
    precision = np.where(predicted > 0, tp / np.where(predicted > 0, predicted, 1.0), 1.0)
    recall = tp / n_pos if n_pos else np.ones_like(tp)
    tpr = tp / n_pos if n_pos else np.zeros_like(tp)
    fpr = fp / n_neg if n_neg else np.zeros_like(fp)

    pr_points = list(zip(recall.tolist(), precision.tolist()))
    roc_points = list(zip(fpr.tolist(), tpr.tolist()))
    return pr_points, roc_points, _auc_exact(pred, gt, n_pos, n_neg)


def _auc_exact(pred, gt, n_pos, n_neg):
    if n_pos == 0 or n_neg == 0:
        return 1.0 if n_neg == 0 else 0.0
    cuts = np.unique(pred)
    tp, fp, _, _ = _counts_at(pred, gt, cuts)
    tpr = np.concatenate([[1.0], tp / n_pos, [0.0]])[::-1]
    fpr = np.concatenate([[1.0], fp / n_neg, [0.0]])[::-1]
    return float(np.trapezoid(tpr, fpr))


def _dependency_kernel():
    radius = WF_GAUSSIAN_SIZE // 2
    y, x = np.mgrid[-radius:radius + 1, -radius:radius + 1].astype(np.float64)
    k = np.exp(-(x * x + y * y) / (2.0 * WF_GAUSSIAN_VAR))
    return k / k.sum()


def weighted_f(pred: np.ndarray, gt: np.ndarray) -> float:
    """Weighted F-measure with beta^2 = 0.3.

    Errors outside the object inherit the error of the nearest object
    pixel before Gaussian smoothing (dependency), and false positives far
    from the object count up to double (importance).
    """
    pred, gt = _validate_pair(pred, gt)
    if not gt.any():
        return 1.0 if pred.max() == 0 else 0.0

    error = np.abs(pred - gt.astype(np.float64))
    dist, (iy, ix) = ndimage.distance_transform_edt(~gt, return_indices=True)
    moved = error.copy()
    moved[~gt] = error[iy[~gt], ix[~gt]]
    smoothed = ndimage.convolve(moved, _dependency_kernel(), mode="constant", cval=0.0)
    combined = error.copy()
    take = gt & (smoothed < error)
    combined[take] = smoothed[take]

    importance = np.ones_like(error)
    importance[~gt] = 2.0 - np.exp(WF_DECAY * dist[~gt])
    weighted = combined * importance

    tp_w = gt.sum() - weighted[gt].sum()
    fp_w = weighted[~gt].sum()
    recall = 1.0 - weighted[gt].mean()
    precision = tp_w / (tp_w + fp_w) if tp_w + fp_w > 0 else 0.0
    denom = BETA_SQ * precision + recall
    if denom <= 0:
        return 0.0
    return float((1.0 + BETA_SQ) * precision * recall / denom)


def overlap_ratio(pred: np.ndarray, gt: np.ndarray) -> float:
    """Jaccard index after adaptive binarization at min(2*mean, 0.98)."""
    pred, gt = _validate_pair(pred, gt)
    threshold = min(2.0 * pred.mean(), 0.98)
    binary = pred >= threshold if threshold > 0 else pred > 0
    union = (binary | gt).sum()
    if union == 0:
        return 1.0
    return float((binary & gt).sum() / union)


def mae(pred: np.ndarray, gt: np.ndarray) -> float:
    """Mean absolute per-pixel difference."""
    pred, gt = _validate_pair(pred, gt)
    return float(np.abs(pred - gt.astype(np.float64)).mean())


def evaluate_pair(pred: np.ndarray, gt: np.ndarray, name: str = ""):
    """All metrics for one prediction/ground-truth pair."""
    pr_points, roc_points, auc = pr_roc(pred, gt)
    scores = ImageScores(name=name, wf=weighted_f(pred, gt),
                         or_score=overlap_ratio(pred, gt),
                         auc=auc, mae=mae(pred, gt))
    return scores, pr_points, roc_points


def aggregate(per_image: list, pr_curves: list, roc_curves: list) -> EvaluationReport:
    """Mean metrics over images; curves averaged per threshold."""
    if not per_image:
        raise InvalidInputError("nothing to aggregate")
    pr = np.asarray(pr_curves, dtype=np.float64).mean(axis=0)
    roc = np.asarray(roc_curves, dtype=np.float64).mean(axis=0)
    return EvaluationReport(
        pr_points=[tuple(p) for p in pr.tolist()],
        roc_points=[tuple(p) for p in roc.tolist()],
        auc=float(np.mean([s.auc for s in per_image])),
        wf=float(np.mean([s.wf for s in per_image])),
        or_score=float(np.mean([s.or_score for s in per_image])),
        mae=float(np.mean([s.mae for s in per_image])),
        per_image=list(per_image),
    )
