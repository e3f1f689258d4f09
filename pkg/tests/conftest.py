import os

import numpy as np
import pytest

from lrsaliency.datasets import ensure_mini_dataset, make_scene

REPO_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


@pytest.fixture(scope="session")
def mini_dataset_dir():
    """The bundled synthetic dataset (regenerated deterministically if a
    checkout is missing it)."""
    return ensure_mini_dataset(os.path.join(REPO_ROOT, "data", "mini"))


@pytest.fixture(scope="session")
def sample_scene():
    """One synthetic scene, shared by read-only tests."""
    rgb, mask = make_scene(314159)
    rgb.setflags(write=False)
    mask.setflags(write=False)
    return rgb, mask


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
