import json
import subprocess
import sys

import pytest

from emobaseline.cli import main


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    """One synth -> ingest -> features chain shared by the CLI tests."""
    root = tmp_path_factory.mktemp("cli")
    rec = root / "rec"
    assert main([
        "synth", "--out", str(rec), "--seed", "7",
        "--shape", "blocks", "--sessions", "4", "--block-s", "192",
    ]) == 0
    labeled = root / "labeled.csv"
    assert main([
        "ingest", "--recordings", str(rec), "--out", str(labeled), "--trim-s", "10",
    ]) == 0
    dataset = root / "data.csv"
    assert main([
        "features", "--signals", str(labeled), "--out", str(dataset), "--w", "32",
    ]) == 0
    return root


class TestPipelineCommands:
    def test_train_rf_writes_model_and_reports_oob(self, workdir, capsys):
        model = workdir / "model.json"
        rc = main([
            "train", "--dataset", str(workdir / "data.csv"), "--clf", "rf",
            "--out", str(model), "--seed", "3", "--params", '{"n_trees": 40}',
            "--importance",
        ])
        out = capsys.readouterr().out
        assert rc == 0
        assert model.exists()
        assert "oob error" in out
        assert "HRV_mean" in out  # importance listing uses feature names

    def test_synth_deterministic_per_seed(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            assert main([
                "synth", "--out", str(out), "--seed", "5",
                "--shape", "blocks", "--sessions", "1", "--block-s", "64",
            ]) == 0
        for p1 in sorted(a.rglob("*")):
            if p1.is_file():
                assert p1.read_bytes() == (b / p1.relative_to(a)).read_bytes()

    def test_eval_sweep_table_shape(self, workdir, capsys):
        rc = main([
            "eval", "--signals", str(workdir / "labeled.csv"),
            "--sweep", "16,32,64", "--clf", "rf", "--method", "oob",
            "--seed", "3", "--params", '{"n_trees": 15}',
        ])
        out = capsys.readouterr().out
        assert rc == 0
        lines = [l for l in out.splitlines() if l.strip()]
        assert "Window Size" in lines[0]
        assert len([l for l in lines if l[:3].strip().isdigit()]) == 3

    def test_eval_cv_report(self, workdir, capsys):
        rc = main([
            "eval", "--dataset", str(workdir / "data.csv"), "--clf", "tree",
            "--k", "5", "--seed", "1",
        ])
        out = capsys.readouterr().out
        assert rc == 0
        assert "mean error" in out

    def test_eval_compare_emits_four_rows(self, workdir, capsys):
        rc = main([
            "eval", "--dataset", str(workdir / "data.csv"), "--compare",
            "--binary", "--k", "3", "--seed", "2",
            "--params", '{"n_trees": 10}',
        ])
        out = capsys.readouterr().out
        assert rc == 0
        for name in ("Decision Tree", "Artificial Neural Network",
                     "Support Vector Machines", "Random Forests"):
            assert name in out


class TestValidatePlan:
    def test_valid_and_invalid_plans(self, tmp_path, capsys):
        from emobaseline.protocol import (
            generate_session,
            make_random_pool,
            neutral_questionnaire,
            save_pool,
            seed_profile,
        )

        pool = make_random_pool(seed=4, clips_per_emotion=50)
        pool_path = tmp_path / "pool.json"
        save_pool(pool_path, pool)
        profile = seed_profile(neutral_questionnaire(pool))
        plan = generate_session(profile, pool)
        plan_path = tmp_path / "plan.json"
        plan_path.write_text(json.dumps(plan.to_dict()))
        assert main(["validate-plan", "--plan", str(plan_path), "--pool", str(pool_path)]) == 0

        doc = plan.to_dict()
        doc["items"] = doc["items"][1:]  # drop the leading rest
        bad_path = tmp_path / "bad.json"
        bad_path.write_text(json.dumps(doc))
        assert main(["validate-plan", "--plan", str(bad_path), "--pool", str(pool_path)]) == 1
        assert "VIOLATION" in capsys.readouterr().out


class TestExitCodes:
    def test_unknown_flag_exits_2(self):
        proc = subprocess.run(
            [sys.executable, "-m", "emobaseline.cli", "train", "--bogus"],
            capture_output=True,
        )
        assert proc.returncode == 2

    def test_unknown_subcommand_exits_2(self):
        proc = subprocess.run(
            [sys.executable, "-m", "emobaseline.cli", "frobnicate"],
            capture_output=True,
        )
        assert proc.returncode == 2

    def test_pipeline_error_exits_1(self, tmp_path):
        rc = main([
            "ingest", "--recordings", str(tmp_path), "--out", str(tmp_path / "x.csv"),
        ])
        assert rc == 1
