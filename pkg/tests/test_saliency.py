import numpy as np
import pytest

from lrsaliency.errors import InvalidInputError
from lrsaliency.saliency import render, saliency_from_sparse
from lrsaliency.superpixel import SuperpixelMap


def test_zero_matrix_gives_zero_scores():
    out = saliency_from_sparse(np.zeros((4, 6)))
    assert np.array_equal(out.scores, np.zeros(6))
    assert out.stage == "coarse"


def test_single_nonzero_column():
    s = np.zeros((3, 5))
    s[:, 2] = (0.5, -0.25, 1.0)
    scores = saliency_from_sparse(s).scores
    expected = np.zeros(5)
    expected[2] = 1.0
    assert np.array_equal(scores, expected)


def test_hand_example():
    s = np.array([[1.0, -1.0, 0.0], [0.0, 2.0, 0.0]])
    scores = saliency_from_sparse(s).scores
    assert scores == pytest.approx([1 / 3, 1.0, 0.0])


def test_permutation_equivariance(rng):
    s = rng.normal(size=(5, 8))
    perm = rng.permutation(8)
    direct = saliency_from_sparse(s).scores[perm]
    permuted = saliency_from_sparse(s[:, perm]).scores
    assert np.allclose(direct, permuted, atol=1e-15)


def test_scale_invariance(rng):
    s = rng.normal(size=(5, 8))
    a = saliency_from_sparse(s).scores
    b = saliency_from_sparse(3.7 * s).scores
    assert np.allclose(a, b, atol=1e-12)


def test_non_finite_rejected():
    with pytest.raises(InvalidInputError):
        saliency_from_sparse(np.array([[np.inf, 0.0]]))


class TestRender:
    def stripes(self):
        labels = np.zeros((6, 9), dtype=np.int32)
        labels[:, 3:6] = 1
        labels[:, 6:] = 2
        return SuperpixelMap.from_labels(labels)

    def test_all_zero_is_black(self):
        spmap = self.stripes()
        assert (render(np.zeros(3), spmap) == 0).all()

    def test_all_one_is_white(self):
        spmap = self.stripes()
        assert (render(np.ones(3), spmap) == 255).all()

    def test_bilevel_matches_masks(self):
        labels = np.zeros((8, 8), dtype=np.int32)
        labels[:, 4:] = 1
        spmap = SuperpixelMap.from_labels(labels)
        img = render(np.array([0.0, 1.0]), spmap)
        assert img.dtype == np.uint8
        assert (img[:, :4] == 0).all()
        assert (img[:, 4:] == 255).all()

    def test_constant_within_regions(self, rng):
        spmap = self.stripes()
        img = render(rng.random(3), spmap)
        for k in range(3):
            assert np.unique(img[spmap.labels == k]).size == 1

    def test_length_mismatch_rejected(self):
        spmap = self.stripes()
        with pytest.raises(InvalidInputError):
            render(np.zeros(4), spmap)
