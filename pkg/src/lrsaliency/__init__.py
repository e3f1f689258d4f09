"""Coarse-to-fine salient object detection with low-rank matrix recovery."""

from .backend import active_backend
from .features import FeatureMatrix, PriorVector, apply_priors, compute_priors, extract_features
from .graph import LaplacianMatrix, build_laplacian
from .metrics import EvaluationReport, mae, overlap_ratio, pr_roc, weighted_f
from .pipeline import PipelineConfig, run_dataset, run_image
from .refinement import (RefinementModel, SamplePartition, learn_projection,
                         partition_samples, refine, tough_labels)
from .saliency import SaliencyMap, render, saliency_from_sparse
from .solver import (DecompositionResult, SolverConfig, decompose,
                     soft_threshold, svt, update_S, update_Z)
from .superpixel import SuperpixelMap, adjacency_of, segment

__all__ = [
    "FeatureMatrix", "PriorVector", "apply_priors", "compute_priors", "extract_features",
    "LaplacianMatrix", "build_laplacian",
    "EvaluationReport", "mae", "overlap_ratio", "pr_roc", "weighted_f",
    "PipelineConfig", "run_dataset", "run_image",
    "RefinementModel", "SamplePartition", "learn_projection",
    "partition_samples", "refine", "tough_labels",
    "SaliencyMap", "render", "saliency_from_sparse",
    "DecompositionResult", "SolverConfig", "decompose",
    "soft_threshold", "svt", "update_S", "update_Z",
    "SuperpixelMap", "adjacency_of", "segment",
    "active_backend",
]

__version__ = "0.1.0"
