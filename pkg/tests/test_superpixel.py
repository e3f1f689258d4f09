import numpy as np
import pytest
from scipy import ndimage

from lrsaliency.errors import InvalidInputError
from lrsaliency.superpixel import SuperpixelMap, adjacency_of, segment

FOUR = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]])


def assert_partition_invariants(spmap):
    labels = spmap.labels
    n = spmap.region_count
    assert labels.min() == 0 and labels.max() == n - 1
    counts = np.bincount(labels.ravel(), minlength=n)
    assert (counts > 0).all()
    assert counts.sum() == labels.size
    assert np.array_equal(counts, spmap.pixel_counts)
    for k in range(n):
        px = spmap.region_pixels[k]
        assert px.shape[0] == counts[k]
        assert (labels[px[:, 0], px[:, 1]] == k).all()


def assert_connected_regions(spmap):
    for k in range(spmap.region_count):
        mask = spmap.labels == k
        _, components = ndimage.label(mask, structure=FOUR)
        assert components == 1, f"region {k} has {components} components"


def test_uniform_image_degenerates_to_grid():
    img = np.full((64, 64, 3), 137, dtype=np.uint8)
    spmap = segment(img, 16)
    assert spmap.region_count == 16
    assert_partition_invariants(spmap)
    assert_connected_regions(spmap)
    # roughly equal cells of ~256 px
    assert spmap.pixel_counts.min() >= 0.8 * 256
    assert spmap.pixel_counts.max() <= 1.2 * 256


def test_grid_adjacency_counts():
    img = np.full((64, 64, 3), 137, dtype=np.uint8)
    spmap = segment(img, 16)
    neighbor_counts = sorted(len(spmap.adjacency[k]) for k in range(16))
    # 4 corners with 2, 8 edge cells with 3, 4 interior with 4
    assert neighbor_counts == [2] * 4 + [3] * 8 + [4] * 4
    corner = spmap.labels[0, 0]
    assert len(adjacency_of(spmap, corner)) == 2


def test_adjacency_symmetry(sample_scene):
    rgb, _ = sample_scene
    spmap = segment(rgb, 80)
    for r in range(spmap.region_count):
        for s in adjacency_of(spmap, r):
            assert r in adjacency_of(spmap, s)
            assert s != r


def test_adjacency_out_of_range(sample_scene):
    rgb, _ = sample_scene
    spmap = segment(rgb, 40)
    with pytest.raises(InvalidInputError):
        adjacency_of(spmap, spmap.region_count)


def test_checkerboard_mean_colors():
    colors = np.array([[200, 40, 40], [40, 40, 200]], dtype=np.uint8)
    img = np.zeros((64, 64, 3), dtype=np.uint8)
    img[:32, :32] = colors[0]
    img[32:, 32:] = colors[0]
    img[:32, 32:] = colors[1]
    img[32:, :32] = colors[1]
    spmap = segment(img, 4)
    assert spmap.region_count == 4
    assert_connected_regions(spmap)
    for k in range(4):
        px = spmap.region_pixels[k]
        mean_color = img[px[:, 0], px[:, 1]].mean(axis=0)
        closest = np.linalg.norm(colors.astype(float) - mean_color, axis=1).min()
        assert closest < 10.0


def test_target_200_region_count(sample_scene):
    rgb, _ = sample_scene
    spmap = segment(rgb, 200)
    assert 140 <= spmap.region_count <= 260
    assert_partition_invariants(spmap)
    assert_connected_regions(spmap)


def test_determinism(sample_scene):
    rgb, _ = sample_scene
    first = segment(rgb, 120)
    second = segment(rgb, 120)
    assert np.array_equal(first.labels, second.labels)


def test_boundary_regions(sample_scene):
    rgb, _ = sample_scene
    spmap = segment(rgb, 60)
    border_labels = set(np.unique(np.concatenate([
        spmap.labels[0], spmap.labels[-1],
        spmap.labels[:, 0], spmap.labels[:, -1]])).tolist())
    assert spmap.boundary_regions == border_labels


def test_degenerate_inputs_rejected():
    with pytest.raises(InvalidInputError):
        segment(np.zeros((1, 1, 3), dtype=np.uint8), 2)
    with pytest.raises(InvalidInputError):
        segment(np.zeros((8, 8, 3), dtype=np.uint8), 65)
    with pytest.raises(InvalidInputError):
        segment(np.zeros((8, 8, 3), dtype=np.uint8), 1)
    with pytest.raises(InvalidInputError):
        segment(np.zeros((8, 8), dtype=np.uint8), 4)


def test_float_image_accepted(sample_scene):
    rgb, _ = sample_scene
    as_float = rgb.astype(np.float64) / 255.0
    a = segment(rgb, 50)
    b = segment(as_float, 50)
    assert np.array_equal(a.labels, b.labels)
    with pytest.raises(InvalidInputError):
        segment(as_float * 2.0, 50)


def test_from_labels_rejects_gaps():
    labels = np.zeros((4, 4), dtype=np.int32)
    labels[2:, :] = 2  # label 1 missing
    with pytest.raises(InvalidInputError):
        SuperpixelMap.from_labels(labels)


def test_noise_falls_back_to_grid(rng):
    noise = (rng.random((60, 80, 3)) * 255).astype(np.uint8)
    spmap = segment(noise, 100)
    assert 70 <= spmap.region_count <= 130
    assert_partition_invariants(spmap)
    assert_connected_regions(spmap)
