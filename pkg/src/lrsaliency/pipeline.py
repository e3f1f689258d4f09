"""Batch orchestration: per-image pipeline, dataset runs, metric CSVs."""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace

import numpy as np
from PIL import Image, UnidentifiedImageError
from threadpoolctl import threadpool_limits

from . import metrics as metrics_mod
from .errors import InvalidInputError
from .features import apply_priors, compute_priors, extract_features
from .graph import build_laplacian
from .refinement import refine
from .saliency import SaliencyMap, render, saliency_from_sparse
from .solver import SolverConfig, decompose, dump_trace
from .superpixel import segment

IMAGE_EXTENSIONS = (".png", ".jpg", ".jpeg", ".bmp")
GT_EXTENSIONS = (".png", ".bmp")

# Config-file aliases: the ridge weight is written "lambda" in config files.
_KEY_ALIASES = {"lambda": "ridge_lambda"}
_INT_FIELDS = {"max_iters", "target_regions", "worker_count"}
_STR_FIELDS = {"stage", "input_dir", "gt_dir", "output_dir"}
_BOOL_FIELDS = {"trace"}


@dataclass
class PipelineConfig:
    """Defaults are the evaluation operating point; see README for the
    config-file format."""

    alpha: float = 0.35
    gamma: float = 1.1
    mu0: float = 0.1
    mu_max: float = 1e10
    rho: float = 1.1
    eps1: float = 1e-6
    eps2: float = 1e-6
    max_iters: int = 500
    target_regions: int = 200
    ridge_lambda: float = 10.0
    tau2_factor: float = 3.0
    sigma_sq_graph: float = 0.05
    stage: str = "refined"
    worker_count: int = 1
    input_dir: str | None = None
    gt_dir: str | None = None
    output_dir: str | None = None
    trace: bool = False

    def __post_init__(self):
        if self.stage not in ("coarse", "refined"):
            raise InvalidInputError("stage must be 'coarse' or 'refined'")
        if self.worker_count < 1:
            raise InvalidInputError("worker_count must be >= 1")
        self.solver_config()  # validates the solver fields

    def solver_config(self) -> SolverConfig:
        return SolverConfig(alpha=self.alpha, gamma=self.gamma, mu0=self.mu0,
                            mu_max=self.mu_max, rho=self.rho, eps1=self.eps1,
                            eps2=self.eps2, max_iters=self.max_iters)


def load_config(path, base: PipelineConfig | None = None) -> PipelineConfig:
    """Parse a flat "key = value" file; unknown keys are errors."""
    cfg = base if base is not None else PipelineConfig()
    known = {f.name for f in fields(PipelineConfig)}
    updates = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidInputError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            key = _KEY_ALIASES.get(key, key)
            if key not in known:
                raise InvalidInputError(f"{path}:{lineno}: unknown key '{key}'")
            if key in _STR_FIELDS:
                updates[key] = value
            elif key in _BOOL_FIELDS:
                updates[key] = value.lower() in ("1", "true", "yes")
            elif key in _INT_FIELDS:
                updates[key] = int(value)
            else:
                updates[key] = float(value)
    return replace(cfg, **updates)


@dataclass
class ImageRecord:
    stem: str
    ok: bool
    timings: dict = field(default_factory=dict)
    error: str = ""
    coarse: SaliencyMap | None = None
    refined: SaliencyMap | None = None
    pixel_map: np.ndarray | None = None  # final-stage uint8 raster


def process_array(image: np.ndarray, config: PipelineConfig):
    """Run segment -> features -> graph -> decompose -> coarse [-> refine]
    on an in-memory RGB array. Returns (record fields) without file I/O."""
    timings = {}
    t0 = time.perf_counter()
    spmap = segment(image, config.target_regions)
    timings["segment"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    feats = extract_features(image, spmap)
    priors = compute_priors(image, spmap, feats)
    weighted = apply_priors(feats, priors)
    timings["features"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    laplacian = build_laplacian(feats, spmap, sigma_sq=config.sigma_sq_graph) if config.gamma > 0 else None
    result = decompose(weighted, laplacian, config.solver_config())
    coarse = saliency_from_sparse(result.S)
    coarse.pixel_map = render(coarse.scores, spmap)
    timings["decompose"] = time.perf_counter() - t0

    refined = None
    if config.stage == "refined":
        t0 = time.perf_counter()
        refined = refine(coarse, feats, spmap, ridge_lambda=config.ridge_lambda,
                         tau2_factor=config.tau2_factor)
        refined.pixel_map = render(refined.scores, spmap)
        timings["refine"] = time.perf_counter() - t0
    return spmap, coarse, refined, result, timings


def run_image(path, config: PipelineConfig, output_dir=None) -> ImageRecord:
    """Process one image file and write its saliency PNG(s)."""
    stem = os.path.splitext(os.path.basename(path))[0]
    out_dir = output_dir if output_dir is not None else config.output_dir
    start = time.perf_counter()
    try:
        with Image.open(path) as img:
            rgb = np.asarray(img.convert("RGB"))
        spmap, coarse, refined, result, timings = process_array(rgb, config)
    except (OSError, UnidentifiedImageError, InvalidInputError, ValueError) as exc:
        return ImageRecord(stem=stem, ok=False, error=f"{type(exc).__name__}: {exc}")

    timings["total"] = time.perf_counter() - start
    final = refined if refined is not None else coarse
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
        Image.fromarray(coarse.pixel_map).save(os.path.join(out_dir, f"{stem}_coarse.png"))
        if refined is not None:
            Image.fromarray(refined.pixel_map).save(os.path.join(out_dir, f"{stem}_refined.png"))
        if config.trace:
            dump_trace(result, os.path.join(out_dir, f"{stem}_trace.csv"))
    return ImageRecord(stem=stem, ok=True, timings=timings, coarse=coarse,
                       refined=refined, pixel_map=final.pixel_map)


def _find_images(input_dir):
    try:
        names = sorted(os.listdir(input_dir))
    except OSError as exc:
        raise InvalidInputError(f"cannot read input dir: {exc}") from exc
    paths = [os.path.join(input_dir, n) for n in names
             if os.path.splitext(n)[1].lower() in IMAGE_EXTENSIONS]
    if not paths:
        raise InvalidInputError(f"no images found in {input_dir}")
    return paths


def load_gt(gt_dir, stem):
    """Ground-truth mask for an image stem, binarized at 128, or None."""
    for ext in GT_EXTENSIONS:
        path = os.path.join(gt_dir, stem + ext)
        if os.path.exists(path):
            with Image.open(path) as img:
                gray = np.asarray(img.convert("L"))
            return gray >= 128
    return None


def run_dataset(config: PipelineConfig):
    """Process every image in config.input_dir; write maps, metrics CSVs
    and a run log. Returns (EvaluationReport | None, records)."""
    if not config.input_dir or not config.output_dir:
        raise InvalidInputError("input_dir and output_dir are required")
    paths = _find_images(config.input_dir)
    os.makedirs(config.output_dir, exist_ok=True)

    # Parallelism comes from the image pool; holding BLAS at one thread
    # here also keeps the workers' nested solver limits race-free.
    with threadpool_limits(limits=1):
        if config.worker_count > 1:
            with ThreadPoolExecutor(max_workers=config.worker_count) as pool:
                records = list(pool.map(lambda p: run_image(p, config), paths))
        else:
            records = [run_image(p, config) for p in paths]
    records.sort(key=lambda r: r.stem)

    log_lines = []
    per_image, pr_curves, roc_curves = [], [], []
    for rec in records:
        if not rec.ok:
            log_lines.append(f"ERROR {rec.stem}: {rec.error}")
            continue
        line = f"OK {rec.stem}: " + " ".join(
            f"{k}={v:.3f}s" for k, v in rec.timings.items())
        if config.gt_dir:
            gt = load_gt(config.gt_dir, rec.stem)
            if gt is None:
                line += " [no ground truth, excluded from metrics]"
            elif gt.shape != rec.pixel_map.shape:
                line += " [ground truth shape mismatch, excluded]"
            else:
                scores, pr_pts, roc_pts = metrics_mod.evaluate_pair(
                    rec.pixel_map.astype(np.float64) / 255.0, gt, name=rec.stem)
                per_image.append(scores)
                pr_curves.append(pr_pts)
                roc_curves.append(roc_pts)
        log_lines.append(line)

    report = None
    if per_image:
        report = metrics_mod.aggregate(per_image, pr_curves, roc_curves)
        _write_metric_csvs(config.output_dir, report)

    with open(os.path.join(config.output_dir, "run.log"), "w") as fh:
        fh.write("\n".join(log_lines) + "\n")
    return report, records


def _write_metric_csvs(output_dir, report):
    with open(os.path.join(output_dir, "metrics.csv"), "w") as fh:
        fh.write("name,wf,or,auc,mae\n")
        for s in report.per_image:
            fh.write(f"{s.name},{s.wf:.6f},{s.or_score:.6f},{s.auc:.6f},{s.mae:.6f}\n")
        fh.write(f"aggregate,{report.wf:.6f},{report.or_score:.6f},"
                 f"{report.auc:.6f},{report.mae:.6f}\n")
    with open(os.path.join(output_dir, "pr.csv"), "w") as fh:
        fh.write("threshold,recall,precision\n")
        for k, (recall, precision) in enumerate(report.pr_points):
            fh.write(f"{k / 255.0:.6f},{recall:.6f},{precision:.6f}\n")
    with open(os.path.join(output_dir, "roc.csv"), "w") as fh:
        fh.write("threshold,fpr,tpr\n")
        for k, (fpr, tpr) in enumerate(report.roc_points):
            fh.write(f"{k / 255.0:.6f},{fpr:.6f},{tpr:.6f}\n")
