"""Small shared numeric helpers."""

import numpy as np

EPS_RANGE = 1e-12


def minmax01(values: np.ndarray) -> np.ndarray:
    """Scale to [0, 1]; a zero-range input maps to all zeros."""
    values = np.asarray(values, dtype=np.float64)
    lo = values.min()
    hi = values.max()
    if hi - lo <= EPS_RANGE:
        return np.zeros_like(values)
    return (values - lo) / (hi - lo)
