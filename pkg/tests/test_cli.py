import json

import pytest

from sessc.cli import main
from sessc.data import load_table


def run_cli(*argv):
    return main(list(argv))


class TestSynth:
    def test_writes_csv_and_manifest(self, tmp_path):
        out = tmp_path / "circles.csv"
        code = run_cli("synth", "--kind", "circles", "--n", "40", "--noise", "0.1",
                       "--seed", "3", "--out", str(out))
        assert code == 0
        data = load_table(out, "label")
        assert data.n_samples == 40 and data.n_classes == 2
        manifest = json.loads((tmp_path / "circles.csv.manifest.json").read_text())
        assert manifest["n_samples"] == 40


class TestBench:
    def test_synthetic_bench(self, tmp_path):
        out = tmp_path / "run"
        code = run_cli("bench", "--synthetic", "quadrant_gaussian", "--synth-n", "80",
                       "--synth-seed", "0", "--algorithm", "sessc", "--rules", "4",
                       "--n-splits", "2", "--cv-folds", "2", "--master-seed", "1",
                       "--grid-gamma", "10", "--grid-eta", "0.01", "--grid-beta", "0.1",
                       "--out", str(out))
        assert code == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert len(manifest["per_split"]) == 2
        assert (out / "splits.csv").exists()

    def test_file_dataset_bench(self, tmp_path):
        csv = tmp_path / "d.csv"
        run_cli("synth", "--kind", "circles", "--n", "60", "--noise", "0.1",
                "--seed", "1", "--out", str(csv))
        out = tmp_path / "run"
        code = run_cli("bench", "--dataset", str(csv), "--algorithm", "fcm_lse",
                       "--rules", "3", "--n-splits", "1", "--cv-folds", "2",
                       "--grid-h", "1", "--grid-lambda", "0.01", "--out", str(out))
        assert code == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["spec"]["dataset"] == str(csv)

    def test_config_file_with_flag_override(self, tmp_path):
        config = tmp_path / "spec.json"
        config.write_text(json.dumps({
            "synthetic": {"kind": "quadrant_gaussian", "n": 80, "noise": 0.0, "seed": 0},
            "algorithm": "sessc", "rules": 4, "n_splits": 2, "cv_folds": 2,
            "master_seed": 9,
            "grids": {"gamma": [10.0], "eta": [0.01], "beta": [0.1]},
        }))
        out = tmp_path / "run"
        code = run_cli("bench", "--config", str(config), "--n-splits", "1",
                       "--out", str(out))
        assert code == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["spec"]["n_splits"] == 1       # flag wins
        assert manifest["spec"]["master_seed"] == 9    # config survives

    def test_requires_dataset_choice(self, tmp_path):
        with pytest.raises(SystemExit):
            run_cli("bench", "--algorithm", "sessc", "--out", str(tmp_path / "x"))

    def test_error_exit_code(self, tmp_path):
        code = run_cli("bench", "--dataset", str(tmp_path / "missing.csv"),
                       "--algorithm", "sessc", "--out", str(tmp_path / "x"))
        assert code == 1


class TestSweep:
    def test_r_sweep_outputs(self, tmp_path):
        out = tmp_path / "sweep"
        code = run_cli("sweep", "--synthetic", "quadrant_gaussian", "--synth-n", "80",
                       "--algorithm", "sessc", "--rules", "4", "--n-splits", "1",
                       "--cv-folds", "2", "--fixed-gamma", "10", "--fixed-eta", "0.01",
                       "--fixed-beta", "0.1", "--parameter", "R", "--values", "2,4",
                       "--out", str(out))
        assert code == 0
        assert (out / "sweep.csv").exists()
        assert (out / "manifest_R=2.json").exists()
        assert (out / "manifest_R=4.json").exists()


class TestBoundary:
    def test_grid_export(self, tmp_path):
        out = tmp_path / "grid.csv"
        code = run_cli("boundary", "--synthetic", "circles", "--synth-n", "100",
                       "--synth-noise", "0.1", "--algorithm", "sessc_lse",
                       "--rules", "5", "--fixed-gamma", "100", "--fixed-eta", "0.01",
                       "--fixed-beta", "0.1", "--fixed-h", "1", "--fixed-lambda", "0.01",
                       "--bounds=-2,2,-2,2", "--resolution", "4",
                       "--out", str(out))
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "x,y,label"
        assert len(lines) == 17

    def test_sessc_alone_boundary(self, tmp_path):
        out = tmp_path / "grid.csv"
        code = run_cli("boundary", "--synthetic", "quadrant_gaussian",
                       "--synth-n", "100", "--algorithm", "sessc", "--rules", "4",
                       "--fixed-gamma", "100", "--fixed-eta", "0.01",
                       "--fixed-beta", "0.1", "--resolution", "3", "--out", str(out))
        assert code == 0
        assert len(out.read_text().strip().splitlines()) == 10

    def test_rejects_non_2d(self, tmp_path):
        csv = tmp_path / "d.csv"
        csv.write_text("a,b,c,label\n" + "\n".join(
            f"{i},{i + 1},{i + 2},{'x' if i % 2 else 'y'}" for i in range(20)) + "\n")
        with pytest.raises(SystemExit):
            run_cli("boundary", "--dataset", str(csv), "--algorithm", "sessc",
                    "--rules", "2", "--fixed-gamma", "1", "--fixed-eta", "0.01",
                    "--fixed-beta", "0.1", "--out", str(tmp_path / "g.csv"))
