"""Kernel backend selection.

Hot per-pixel loops (SLIC assignment, connectivity enforcement, region
statistics) exist twice: a numba @njit implementation and a pure
numpy/scipy fallback with identical signatures and outputs. The active
backend is chosen once at import time:

  LRSALIENCY_BACKEND=numba   force numba (error if numba missing)
  LRSALIENCY_BACKEND=numpy   force the numpy fallback
  unset                      numba when importable, else numpy

``benchmarks/bench_backends.py`` times the two implementations against
each other; the test suite asserts they produce identical labels.
"""

import os

_ENV_VAR = "LRSALIENCY_BACKEND"

try:
    import numba  # noqa: F401

    _NUMBA_IMPORTABLE = True
except ImportError:
    _NUMBA_IMPORTABLE = False


def _resolve() -> str:
    requested = os.environ.get(_ENV_VAR, "").strip().lower()
    if requested in ("numba", "numpy"):
        if requested == "numba" and not _NUMBA_IMPORTABLE:
            raise ImportError(
                f"{_ENV_VAR}=numba requested but numba is not importable"
            )
        return requested
    return "numba" if _NUMBA_IMPORTABLE else "numpy"


ACTIVE_BACKEND = _resolve()

# njit options for the hot kernels. fastmath stays off: the numpy fallback
# must produce bit-identical labels, which reassociation would break.
JIT_OPTIONS = {"nogil": True, "cache": True}


def active_backend() -> str:
    """Name of the kernel backend selected at import time."""
    return ACTIVE_BACKEND
