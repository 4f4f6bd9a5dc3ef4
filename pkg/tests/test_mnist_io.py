import math
import struct

import numpy as np
import pytest

from src.services.mnist_service import PROVENANCE_FILE, RELABELED_FILE, SUMMARY_FILE, relabel_campaign
from src.services.policy_service import FixedPolicy
from src.services.stats_service import strict_majority_prob_exact
from src.utils.exceptions import IdxFormatError
from src.utils.idx_format import (
    read_idx_images,
    read_idx_labels,
    write_idx_images,
    write_idx_labels,
)


@pytest.fixture
def labels_file(tmp_path):
    rng = np.random.default_rng(0)
    return write_idx_labels(tmp_path / "train-labels-idx1-ubyte", rng.integers(0, 10, size=3000))


class TestIdx:
    def test_crafted_labels(self, tmp_path):
        path = tmp_path / "labels"
        path.write_bytes(struct.pack(">II", 0x801, 4) + bytes([7, 2, 1, 0]))
        labels = read_idx_labels(path)
        assert labels.count == 4
        assert labels.labels.tolist() == [7, 2, 1, 0]

    def test_write_then_read(self, tmp_path):
        path = write_idx_labels(tmp_path / "labels", [3, 1, 4, 1, 5, 9])
        assert path.read_bytes()[:8] == struct.pack(">II", 0x801, 6)
        assert read_idx_labels(path).labels.tolist() == [3, 1, 4, 1, 5, 9]

    def test_image_magic_rejected_by_label_reader(self, tmp_path):
        path = tmp_path / "labels"
        path.write_bytes(struct.pack(">II", 0x803, 1) + bytes([1]))
        with pytest.raises(IdxFormatError):
            read_idx_labels(path)

    def test_truncated_labels(self, tmp_path):
        path = tmp_path / "labels"
        path.write_bytes(struct.pack(">II", 0x801, 5) + bytes([1, 2]))
        with pytest.raises(IdxFormatError):
            read_idx_labels(path)

    def test_short_header(self, tmp_path):
        path = tmp_path / "labels"
        path.write_bytes(b"\x00\x00")
        with pytest.raises(IdxFormatError):
            read_idx_labels(path)

    def test_label_out_of_range(self, tmp_path):
        path = tmp_path / "labels"
        path.write_bytes(struct.pack(">II", 0x801, 2) + bytes([3, 10]))
        with pytest.raises(IdxFormatError):
            read_idx_labels(path)

    def test_crafted_images(self, tmp_path):
        pixels = np.arange(2 * 28 * 28, dtype=np.uint32).reshape(2, 28, 28) % 256
        path = write_idx_images(tmp_path / "images", pixels)
        images = read_idx_images(path)
        assert (images.count, images.rows, images.cols) == (2, 28, 28)
        assert images.pixels.size == 1568
        assert np.array_equal(images.pixels, pixels)

    def test_wrong_image_dimensions(self, tmp_path):
        path = tmp_path / "images"
        path.write_bytes(struct.pack(">IIII", 0x803, 1, 27, 28) + bytes(27 * 28))
        with pytest.raises(IdxFormatError):
            read_idx_images(path)

    def test_truncated_images(self, tmp_path):
        path = tmp_path / "images"
        path.write_bytes(struct.pack(">IIII", 0x803, 2, 28, 28) + bytes(784))
        with pytest.raises(IdxFormatError):
            read_idx_images(path)


class TestRelabel:
    def test_noiseless_single_validation_reproduces_labels(self, labels_file, tmp_path):
        labels = read_idx_labels(labels_file)
        out = relabel_campaign(labels, 0.0, FixedPolicy(1), 5000, master_seed=1, out_dir=tmp_path / "out")
        assert out.labels_path.read_bytes() == labels_file.read_bytes()
        assert out.summary.label_accuracy == 1.0

    def test_budget_cutoff_keeps_input_order(self, labels_file, tmp_path):
        labels = read_idx_labels(labels_file)
        out = relabel_campaign(labels, 0.0, FixedPolicy(3), 3000, master_seed=1, out_dir=tmp_path / "out")
        relabeled = read_idx_labels(out.labels_path)
        assert relabeled.count == len(out.result.labeled) == 1000
        assert relabeled.labels.tolist() == labels.labels[:1000].tolist()

    def test_outputs(self, labels_file, tmp_path):
        labels = read_idx_labels(labels_file)
        out_dir = tmp_path / "out"
        relabel_campaign(labels, 0.2, FixedPolicy(5), 15000, master_seed=7, out_dir=out_dir)

        provenance = (out_dir / PROVENANCE_FILE).read_text(encoding="utf-8").splitlines()
        assert provenance[0] == "example_id,assigned_label,true_label,queries_used,correct,finalize_reason,peaked"
        assert len(provenance) == 3001
        summary = (out_dir / SUMMARY_FILE).read_text(encoding="utf-8")
        assert "labeled=3000\n" in summary
        assert "total_queries=15000\n" in summary
        assert (out_dir / RELABELED_FILE).exists()

    @pytest.mark.parametrize("w, v", [(0.2, 5), (0.8, 1)])
    def test_accuracy_within_four_sigma(self, labels_file, tmp_path, w, v):
        labels = read_idx_labels(labels_file)
        out = relabel_campaign(labels, w, FixedPolicy(v), 3000 * v, master_seed=3, out_dir=tmp_path / "out")
        expected = strict_majority_prob_exact(10, 1.0 - w, v).tie_resolved_prob
        sigma = math.sqrt(expected * (1 - expected) / 3000)
        assert abs(out.summary.label_accuracy - expected) <= 4 * sigma

    def test_image_count_mismatch(self, labels_file, tmp_path):
        labels = read_idx_labels(labels_file)
        images = read_idx_images(write_idx_images(tmp_path / "images", np.zeros((2, 28, 28), dtype=np.uint8)))
        with pytest.raises(IdxFormatError):
            relabel_campaign(labels, 0.2, FixedPolicy(1), 10, master_seed=1, out_dir=tmp_path / "out", images=images)
        assert not (tmp_path / "out").exists()
