"""
Command-line tests: exit codes, artifacts and reproducibility.
"""

import json
import os

import numpy as np
import pytest

from dilated_shapelets.datasets import load_tsv
from dilated_shapelets.main import main

FAST = ["--n-shapelets", "120", "--lengths", "7,9"]


def fit_model(train_path, out_path, *extra):
    return main(["fit", str(train_path), "-o", str(out_path), *FAST, *extra])


@pytest.mark.integration
class TestFit:
    def test_default_generation_parameters(self, tsv_pair, tmp_path):
        train_path, _ = tsv_pair
        out = tmp_path / "model.json"
        assert main(["fit", str(train_path), "-o", str(out)]) == 0
        archive = json.loads(out.read_text())
        assert archive["config"] == {
            "n_shapelets": 10000,
            "lengths": [11],
            "p_norm": 0.8,
            "p1": 5.0,
            "p2": 10.0,
        }
        assert len(archive["shapelets"]) == 10000
        assert {len(s["values"]) for s in archive["shapelets"]} == {11}
        normalized = np.mean([s["normalized"] for s in archive["shapelets"]])
        assert abs(normalized - 0.8) < 0.03

    def test_reversed_percentiles_exit_2(self, tsv_pair, tmp_path):
        train_path, _ = tsv_pair
        code = main(["fit", str(train_path), "-o", str(tmp_path / "m.json"), "--p1", "20", "--p2", "10"])
        assert code == 2
        assert not (tmp_path / "m.json").exists()

    def test_length_longer_than_series_exit_2(self, tsv_pair, tmp_path):
        train_path, _ = tsv_pair
        assert fit_model(train_path, tmp_path / "m.json", "--lengths", "80") == 2

    def test_invalid_alpha_grid_exit_2(self, tsv_pair, tmp_path):
        train_path, _ = tsv_pair
        assert fit_model(train_path, tmp_path / "m.json", "--alpha-grid", "1,-1") == 2

    def test_missing_file_exit_3(self, tmp_path):
        assert fit_model(tmp_path / "absent.tsv", tmp_path / "m.json") == 3

    def test_single_class_exit_3(self, tmp_path):
        path = tmp_path / "one.tsv"
        path.write_text("1\t0\t1\t2\t3\t4\t5\t6\t7\n1\t1\t0\t2\t3\t4\t5\t6\t7\n")
        assert main(["fit", str(path), "-o", str(tmp_path / "m.json"), "--lengths", "3"]) == 3

    @pytest.mark.parametrize("seed", ["-1", str(2**64)])
    def test_out_of_range_seed_exit_2(self, tsv_pair, tmp_path, seed):
        train_path, test_path = tsv_pair
        assert fit_model(train_path, tmp_path / "m.json", "--seed", seed) == 2
        assert not (tmp_path / "m.json").exists()
        pair = f"{train_path},{test_path}"
        assert main(["sweep", pair, "--n-shapelets", "10", "--lengths", "7", "--seed", seed]) == 2

    def test_same_seed_identical_archives_across_threads(self, tsv_pair, tmp_path):
        train_path, _ = tsv_pair
        outputs = []
        for threads in (1, 4, os.cpu_count() or 1):
            out = tmp_path / f"model_{threads}.json.gz"
            assert fit_model(train_path, out, "--seed", "42", "--threads", str(threads)) == 0
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1] == outputs[2]

    def test_seed_changes_archive(self, tsv_pair, tmp_path):
        train_path, _ = tsv_pair
        fit_model(train_path, tmp_path / "a.json", "--seed", "1")
        fit_model(train_path, tmp_path / "b.json", "--seed", "2")
        assert (tmp_path / "a.json").read_bytes() != (tmp_path / "b.json").read_bytes()


@pytest.fixture
def model_path(tsv_pair, tmp_path):
    train_path, _ = tsv_pair
    path = tmp_path / "model.json"
    assert fit_model(train_path, path, "--seed", "3") == 0
    return path


@pytest.mark.integration
class TestPredict:
    def test_training_labels_recovered(self, model_path, tsv_pair, tmp_path):
        train_path, _ = tsv_pair
        out = tmp_path / "labels.txt"
        assert main(["predict", str(model_path), str(train_path), "-o", str(out)]) == 0
        predicted = [int(line) for line in out.read_text().splitlines()]
        expected = list(load_tsv(train_path).labels)
        assert len(predicted) == len(expected)
        assert np.mean(np.asarray(predicted) == np.asarray(expected)) >= 0.9

    def test_stdout_and_scores(self, model_path, tsv_pair, tmp_path, capsys):
        _, test_path = tsv_pair
        scores = tmp_path / "scores.csv"
        assert main(["predict", str(model_path), str(test_path), "--scores", str(scores)]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert len(lines) == load_tsv(test_path).n_series
        rows = scores.read_text().splitlines()
        assert rows[0] == "class_0,class_1"
        assert len(rows) == len(lines) + 1

    def test_deterministic(self, model_path, tsv_pair, tmp_path):
        _, test_path = tsv_pair
        for name in ("a.txt", "b.txt"):
            main(["predict", str(model_path), str(test_path), "-o", str(tmp_path / name)])
        assert (tmp_path / "a.txt").read_bytes() == (tmp_path / "b.txt").read_bytes()

    def test_wrong_length_exit_3(self, model_path, tmp_path, capsys):
        path = tmp_path / "short.tsv"
        path.write_text("0\t" + "\t".join(["0.5"] * 50) + "\n")
        assert main(["predict", str(model_path), str(path)]) == 3
        assert "expected 64" in capsys.readouterr().err

    def test_unlabeled_input(self, model_path, tsv_pair, tmp_path):
        _, test_path = tsv_pair
        unlabeled = tmp_path / "raw.tsv"
        unlabeled.write_text(
            "".join(line.split("\t", 1)[1] for line in test_path.read_text().splitlines(True))
        )
        labeled_out = tmp_path / "labeled.txt"
        raw_out = tmp_path / "raw.txt"
        main(["predict", str(model_path), str(test_path), "-o", str(labeled_out)])
        assert main(["predict", str(model_path), str(unlabeled), "--no-labels", "-o", str(raw_out)]) == 0
        assert labeled_out.read_text() == raw_out.read_text()

    def test_corrupt_archive_exit_3(self, tsv_pair, tmp_path):
        _, test_path = tsv_pair
        bad = tmp_path / "bad.json"
        bad.write_text("[]")
        assert main(["predict", str(bad), str(test_path)]) == 3


@pytest.mark.integration
class TestEvaluate:
    def test_report(self, tsv_pair, tmp_path):
        train_path, test_path = tsv_pair
        out = tmp_path / "report.json"
        code = main(
            ["evaluate", str(train_path), str(test_path), "-o", str(out), *FAST, "--n-resamples", "3"]
        )
        assert code == 0
        report = json.loads(out.read_text())
        assert len(report["accuracies"]) == 3
        assert all(0.0 <= a <= 1.0 for a in report["accuracies"])
        assert report["mean"] == pytest.approx(np.mean(report["accuracies"]))
        assert set(report["timings"][0]) == {"fit_s", "transform_s", "predict_s"}

    def test_bad_fraction_exit_2(self, tsv_pair):
        train_path, test_path = tsv_pair
        code = main(["evaluate", str(train_path), str(test_path), *FAST, "--train-fraction", "1.5"])
        assert code == 2


@pytest.mark.integration
class TestExplain:
    def test_bundle(self, model_path, tsv_pair, tmp_path):
        _, test_path = tsv_pair
        out = tmp_path / "bundle"
        assert main(["explain", str(model_path), str(test_path), "1", "-o", str(out)]) == 0
        assert sorted(p.name for p in out.iterdir()) == [
            "distribution.json",
            "placements.json",
            "ranking.csv",
            "ranking.json",
            "summary.csv",
            "summary.json",
        ]
        archive = json.loads(model_path.read_text())
        n_shapelets = len(archive["shapelets"])
        placements = json.loads((out / "placements.json").read_text())
        assert len(placements["shapelets"]) == 1
        top = placements["shapelets"][0]
        assert len(top["placements"]) == load_tsv(test_path).n_series
        ranking = json.loads((out / "ranking.json").read_text())
        assert top["shapelet"] == ranking["entries"][0]["shapelet"]
        assert all(0 <= e["shapelet"] < n_shapelets for e in ranking["entries"])
        distribution = json.loads((out / "distribution.json").read_text())
        assert [d["shapelet"] for d in distribution["shapelets"]] == [top["shapelet"]]

    def test_top_k(self, model_path, tsv_pair, tmp_path):
        _, test_path = tsv_pair
        out = tmp_path / "bundle"
        assert main(["explain", str(model_path), str(test_path), "0", "-o", str(out), "--top-k", "3"]) == 0
        placements = json.loads((out / "placements.json").read_text())
        indices = [s["shapelet"] for s in placements["shapelets"]]
        assert len(indices) == len(set(indices)) == 3

    def test_rerun_is_byte_identical(self, model_path, tsv_pair, tmp_path):
        _, test_path = tsv_pair
        for name in ("first", "second"):
            main(["explain", str(model_path), str(test_path), "1", "-o", str(tmp_path / name)])
        for path in (tmp_path / "first").iterdir():
            assert path.read_bytes() == (tmp_path / "second" / path.name).read_bytes()

    def test_unknown_class_exit_2(self, model_path, tsv_pair, tmp_path):
        _, test_path = tsv_pair
        assert main(["explain", str(model_path), str(test_path), "7", "-o", str(tmp_path / "b")]) == 2

    def test_without_labels_skips_distribution(self, model_path, tsv_pair, tmp_path):
        _, test_path = tsv_pair
        unlabeled = tmp_path / "raw.tsv"
        unlabeled.write_text(
            "".join(line.split("\t", 1)[1] for line in test_path.read_text().splitlines(True))
        )
        out = tmp_path / "bundle"
        assert main(["explain", str(model_path), str(unlabeled), "1", "--no-labels", "-o", str(out)]) == 0
        assert not (out / "distribution.json").exists()



@pytest.mark.integration
class TestTextLabels:
    LEVEL = ["--n-shapelets", "40", "--lengths", "7", "--p-norm", "0"]

    @pytest.fixture
    def level_model(self, level_files, tmp_path):
        train_path, _ = level_files
        path = tmp_path / "levels.json"
        assert main(["fit", str(train_path), "-o", str(path), *self.LEVEL]) == 0
        return path

    def test_predict_prints_training_labels(self, level_model, level_files, tmp_path):
        _, test_path = level_files
        out = tmp_path / "labels.txt"
        scores = tmp_path / "scores.csv"
        code = main(["predict", str(level_model), str(test_path), "-o", str(out), "--scores", str(scores)])
        assert code == 0
        assert out.read_text().splitlines() == ["b", "b", "c", "c"]
        assert scores.read_text().splitlines()[0] == "class_a,class_b,class_c"

    def test_evaluate_scores_against_training_codes(self, level_files, tmp_path):
        train_path, test_path = level_files
        out = tmp_path / "report.json"
        assert main(["evaluate", str(train_path), str(test_path), "-o", str(out), *self.LEVEL]) == 0
        assert json.loads(out.read_text())["accuracies"] == [1.0]

    def test_explain_accepts_text_class(self, level_model, level_files, tmp_path):
        _, test_path = level_files
        assert main(["explain", str(level_model), str(test_path), "c", "-o", str(tmp_path / "c")]) == 0
        ranking = json.loads((tmp_path / "c" / "ranking.json").read_text())
        assert ranking["class"] == 2
        assert main(["explain", str(level_model), str(test_path), "d", "-o", str(tmp_path / "d")]) == 2

@pytest.mark.integration
class TestSynthesizeSweepScale:
    def test_synthesize(self, tmp_path):
        code = main(
            ["synthesize", "-o", str(tmp_path), "--n-per-class", "6", "--length", "64",
             "--pattern-length", "5", "--pattern-dilation", "2", "--regime", "scale"]
        )
        assert code == 0
        train = load_tsv(tmp_path / "Synthetic_TRAIN.tsv")
        test = load_tsv(tmp_path / "Synthetic_TEST.tsv")
        assert train.n_series == test.n_series == 12

    def test_synthesize_pattern_too_long_exit_2(self, tmp_path):
        assert main(["synthesize", "-o", str(tmp_path), "--length", "20"]) == 2

    def test_sweep_csv(self, tsv_pair, tmp_path):
        train_path, test_path = tsv_pair
        out = tmp_path / "sweep.csv"
        code = main(
            ["sweep", f"{train_path},{test_path}", "-o", str(out), "--base", "default",
             "--n-shapelets", "20", "40", "--lengths", "7", "--threads", "1"]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "config_id,dataset,resample,accuracy,fit_s,transform_s,predict_s"
        assert len(lines) == 3

    def test_scale_zero_point_exit_2(self, tmp_path):
        assert main(["scale", "--points", "0", "--n-shapelets", "10", "--lengths", "7"]) == 2

    def test_scale_csv(self, tmp_path):
        out = tmp_path / "scale.csv"
        code = main(
            ["scale", "--axis", "n_series", "--points", "8", "16", "--repeats", "1",
             "--length", "64", "--n-shapelets", "10", "--lengths", "7", "-o", str(out)]
        )
        assert code == 0
        assert len(out.read_text().splitlines()) == 3
