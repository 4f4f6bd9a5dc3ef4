import json

import numpy as np
import pytest

from label_budget import run
from src.utils.idx_format import write_idx_labels


class TestChi:
    def test_reference_tally(self, capsys):
        assert run(["chi", "0", "0", "7", "0", "1", "0", "2", "0", "0", "0"]) == 0
        assert "1.411e-06" in capsys.readouterr().out

    def test_two_way_split(self, capsys):
        assert run(["chi", "0", "0", "5", "0", "0", "0", "0", "0", "5", "0"]) == 0
        assert "7.599e-06" in capsys.readouterr().out

    def test_single_class(self):
        assert run(["chi", "4"]) == 1

    def test_empty_tally(self):
        assert run(["chi", "0", "0", "0"]) == 1


class TestPoker:
    def test_reference_equity(self, capsys):
        assert run(["poker", "equity", "Qh", "Js", "--", "7s", "7d", "--", "2s", "9s", "Ts"]) == 0
        out = capsys.readouterr().out
        assert "P1 share=0.6697" in out
        assert "P2 share=0.3303" in out

    def test_wrong_card_count(self):
        assert run(["poker", "equity", "Qh", "Js", "7s", "7d", "2s", "9s"]) == 1

    def test_malformed_card(self):
        assert run(["poker", "equity", "1x", "Js", "7s", "7d", "2s", "9s", "Ts"]) == 1

    def test_sample_requires_seed(self):
        assert run(["poker", "sample", "Qh", "Js", "7s", "7d", "2s", "9s", "Ts"]) == 1

    def test_sample(self, capsys):
        assert run(["poker", "sample", "--n", "200", "--seed", "3", "Qh", "Js", "7s", "7d", "2s", "9s", "Ts"]) == 0
        assert "n=200" in capsys.readouterr().out


class TestSimulate:
    def test_writes_outputs(self, write_config, tmp_path):
        assert run(["simulate", "--config", str(write_config())]) == 0
        summary = (tmp_path / "out" / "summary.txt").read_text(encoding="utf-8")
        assert "labeled=3\n" in summary
        assert "total_queries=9\n" in summary
        examples = (tmp_path / "out" / "examples.csv").read_text(encoding="utf-8").splitlines()
        assert len(examples) == 4

    def test_overrides_without_file(self, tmp_path):
        out_dir = tmp_path / "flags"
        code = run([
            "simulate", "--classes", "4", "--noise", "0.3", "--policy", "fixed:v=1",
            "--s-max", "5", "--examples", "20", "--seed", "1", "--out-dir", str(out_dir)
        ])
        assert code == 0
        assert "labeled=5\n" in (out_dir / "summary.txt").read_text(encoding="utf-8")

    def test_malformed_policy_writes_nothing(self, write_config, tmp_path):
        assert run(["simulate", "--config", str(write_config(policy="fixed:v=0"))]) == 1
        assert not (tmp_path / "out").exists()

    def test_invalid_noise_writes_nothing(self, write_config, tmp_path):
        oracle = {"kind": "uniform", "l": 10, "w": 0.95}
        assert run(["simulate", "--config", str(write_config(oracle=oracle))]) == 1
        assert not (tmp_path / "out").exists()

    def test_missing_seed(self, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({
            "oracle": {"kind": "uniform", "l": 10, "w": 0.2},
            "policy": "fixed:v=3",
            "s_max": 9,
            "examples": 10,
            "out_dir": str(tmp_path / "out"),
        }), encoding="utf-8")
        assert run(["simulate", "--config", str(path)]) == 1
        assert run(["simulate", "--config", str(path), "--seed", "5"]) == 0

    def test_missing_config_file(self, tmp_path):
        assert run(["simulate", "--config", str(tmp_path / "missing.json")]) == 1

    def test_balanced_poker_matchup(self, write_config):
        oracle = {"kind": "poker", "p1": "Ah Kd", "p2": "Ad Kh", "flop": "2c 3c 4c"}
        assert run(["simulate", "--config", str(write_config(oracle=oracle))]) == 1

    def test_poker_oracle(self, write_config, tmp_path):
        oracle = {"kind": "poker", "p1": "Qh Js", "p2": "7s 7d", "flop": "2s 9s Ts"}
        path = write_config(oracle=oracle, policy="fixed:v=5", s_max=50)
        assert run(["simulate", "--config", str(path)]) == 0
        assert "labeled=10\n" in (tmp_path / "out" / "summary.txt").read_text(encoding="utf-8")

    def test_thread_count_gives_identical_files(self, write_config, tmp_path):
        path = write_config(policy="chi:threshold=0.05;cap=0", s_max=700, examples=400)
        for threads, name in [("1", "serial"), ("4", "parallel")]:
            assert run(["--threads", threads, "simulate", "--config", str(path), "--out-dir", str(tmp_path / name)]) == 0

        for file_name in ["examples.csv", "summary.txt"]:
            serial = (tmp_path / "serial" / file_name).read_bytes()
            parallel = (tmp_path / "parallel" / file_name).read_bytes()
            assert serial == parallel

    def test_unexpected_error_is_runtime_failure(self, mocker, write_config):
        mocker.patch("label_budget.LabelingOrchestrator.simulate", side_effect=RuntimeError("disco lleno"))
        assert run(["simulate", "--config", str(write_config())]) == 2


class TestCurves:
    def test_small_grid(self, tmp_path):
        out = tmp_path / "curves.csv"
        code = run([
            "curves", "--noise", "0.2,0.4", "--validations", "1..3",
            "--trials", "500", "--seed", "7", "--out", str(out)
        ])
        assert code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == "l,w,v,strict_prob,tie_resolved_prob,mc_mean,mc_stderr"
        assert len(lines) == 7
        assert lines[1].startswith("10,0.2,1,")

    def test_noise_out_of_range_writes_nothing(self, tmp_path):
        out = tmp_path / "curves.csv"
        code = run([
            "curves", "--noise", "0.2,0.9", "--validations", "1,3",
            "--trials", "10", "--seed", "7", "--out", str(out)
        ])
        assert code == 1
        assert not out.exists()

    def test_binary_long_grid(self, tmp_path):
        out = tmp_path / "curves.csv"
        code = run([
            "curves", "-l", "2", "--noise", "0.4", "--validations", "171,301",
            "--trials", "200", "--seed", "7", "--out", str(out)
        ])
        assert code == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 3
        assert lines[2].startswith("2,0.4,301,")

    def test_seed_is_required(self, tmp_path):
        assert run(["curves", "--out", str(tmp_path / "curves.csv")]) == 1


class TestTradeoff:
    def test_writes_csv(self, tmp_path, capsys):
        out = tmp_path / "tradeoff.csv"
        code = run(["tradeoff", "--noise", "0.4", "--s-max", "1000", "--validations", "1,3,5", "--out", str(out)])
        assert code == 0
        assert len(out.read_text(encoding="utf-8").splitlines()) == 4
        assert "Cantidad vs calidad" in capsys.readouterr().out


class TestMnistRelabel:
    @pytest.fixture
    def labels_path(self, tmp_path):
        return write_idx_labels(tmp_path / "labels-idx1-ubyte", np.arange(50) % 10)

    def test_noiseless_relabel(self, labels_path, tmp_path):
        out_dir = tmp_path / "relabeled"
        code = run([
            "mnist-relabel", "--labels", str(labels_path), "--noise", "0", "--policy", "fixed:v=1",
            "--s-max", "100", "--seed", "1", "--out-dir", str(out_dir)
        ])
        assert code == 0
        assert (out_dir / "relabeled-labels-idx1-ubyte").read_bytes() == labels_path.read_bytes()
        assert (out_dir / "provenance.csv").exists()

    def test_malformed_policy(self, labels_path, tmp_path):
        out_dir = tmp_path / "relabeled"
        code = run([
            "mnist-relabel", "--labels", str(labels_path), "--noise", "0.2", "--policy", "fixed",
            "--s-max", "100", "--seed", "1", "--out-dir", str(out_dir)
        ])
        assert code == 1
        assert not out_dir.exists()

    def test_corrupt_labels_file(self, tmp_path):
        path = tmp_path / "broken"
        path.write_bytes(b"\x00\x00\x08")
        code = run([
            "mnist-relabel", "--labels", str(path), "--noise", "0.2", "--policy", "fixed:v=1",
            "--s-max", "100", "--seed", "1", "--out-dir", str(tmp_path / "out")
        ])
        assert code == 2


def test_help(capsys):
    assert run(["--help"]) == 0
    assert "simulate" in capsys.readouterr().out
