import json

import pytest

import crbgate as cg
from crbgate.cli import main
from crbgate.wireless import dump_measurements


@pytest.fixture
def scene_file(tmp_path):
    path = tmp_path / "scene.json"
    path.write_text(json.dumps(cg.scene_to_json(cg.default_scene())))
    return path


@pytest.fixture
def measurements_file(tmp_path):
    scene = cg.default_scene()
    frames = [
        cg.sample_measurements(
            scene.anchors, cg.TargetState((4.0 + k, 5.0)), scene.noise, float(k), k
        )
        for k in range(3)
    ]
    path = tmp_path / "frames.jsonl"
    dump_measurements(frames, path)
    return path


class TestUsageErrors:
    def test_no_command_exits_2(self):
        assert main([]) == 2

    def test_unknown_command_exits_2(self):
        assert main(["frobnicate"]) == 2

    def test_missing_required_flag_exits_2(self):
        assert main(["heatmap", "--out", "x.csv"]) == 2

    def test_runtime_error_exits_1(self, tmp_path, capsys):
        missing = tmp_path / "none.json"
        code = main(
            ["heatmap", "--scene", str(missing), "--out", str(tmp_path / "o.csv")]
        )
        assert code == 1
        err = json.loads(capsys.readouterr().err)
        assert "error" in err


class TestHeatmapCommand:
    def test_writes_csv_and_figure(self, scene_file, tmp_path):
        out = tmp_path / "heat.csv"
        code = main(
            [
                "heatmap",
                "--scene",
                str(scene_file),
                "--sigma",
                "3",
                "--grid",
                "8x6",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "x_m,y_m,best_rmse_m"
        assert len(lines) == 1 + 8 * 6
        assert (tmp_path / "heat.png").exists()

    def test_bad_grid_exits_1(self, scene_file, tmp_path):
        code = main(
            ["heatmap", "--scene", str(scene_file), "--grid", "banana",
             "--out", str(tmp_path / "h.csv")]
        )
        assert code == 1


class TestSimulateCommand:
    def test_deterministic_byte_identical(self, scene_file, tmp_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        for out in (out1, out2):
            code = main(
                [
                    "simulate",
                    "--scene",
                    str(scene_file),
                    "--sigmas",
                    "3,5",
                    "--trials",
                    "8",
                    "--seed",
                    "123",
                    "--out",
                    str(out),
                ]
            )
            assert code == 0
        assert out1.read_bytes() == out2.read_bytes()
        assert (tmp_path / "a.png").exists()

    def test_header(self, scene_file, tmp_path):
        out = tmp_path / "sim.csv"
        main(
            ["simulate", "--scene", str(scene_file), "--sigmas", "3",
             "--trials", "4", "--seed", "1", "--out", str(out)]
        )
        assert out.read_text().splitlines()[0] == (
            "sigma_dbm,rmse_m,crb_rmse_m,coverage,trials,failures"
        )


class TestCoverageCommand:
    def test_prints_json(self, scene_file, capsys):
        code = main(
            ["coverage", "--scene", str(scene_file), "--alpha", "0.05",
             "--trials", "30", "--seed", "5"]
        )
        assert code == 0
        body = json.loads(capsys.readouterr().out)
        assert 0.0 <= body["coverage"] <= 1.0


class TestGateCommand:
    def test_three_frames_three_lines(self, scene_file, measurements_file, tmp_path):
        out = tmp_path / "gate.jsonl"
        code = main(
            ["gate", "--scene", str(scene_file), "--measurements",
             str(measurements_file), "--alpha", "0.05", "--out", str(out)]
        )
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 3
        for line in lines:
            obj = json.loads(line)
            assert obj["error"] is None

    def test_deterministic_byte_identical(self, scene_file, measurements_file, tmp_path):
        outs = []
        for name in ("g1.jsonl", "g2.jsonl"):
            out = tmp_path / name
            main(
                ["gate", "--scene", str(scene_file), "--measurements",
                 str(measurements_file), "--out", str(out)]
            )
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]


class TestEvalCommand:
    def test_perfect_predictions_auc_one(self, tmp_path):
        from crbgate.metrics import gt_to_csv

        gt = [cg.GtBox(i, 10.0 * i, 5.0, 12.0, 20.0, True) for i in range(10)]
        gt_path = tmp_path / "gt.csv"
        gt_path.write_text(gt_to_csv(gt))
        out_dir = tmp_path / "report"
        code = main(
            ["eval", "--pred", str(gt_path), "--gt", str(gt_path),
             "--out", str(out_dir)]
        )
        assert code == 0
        summary = json.loads((out_dir / "summary.json").read_text())
        assert summary["auc"] == pytest.approx(1.0, abs=1e-2)
        assert summary["recall"] == 100.0
        assert (out_dir / "curve.csv").exists()
        assert (out_dir / "success_plot.png").exists()

    def test_eval_on_gate_output(self, scene_file, measurements_file, tmp_path):
        gate_out = tmp_path / "gate.jsonl"
        main(
            ["gate", "--scene", str(scene_file), "--measurements",
             str(measurements_file), "--out", str(gate_out)]
        )
        # ground truth: the projected true positions, tiny boxes
        scene = cg.default_scene()
        cam = scene.cameras[0]
        rows = []
        for k in range(3):
            px, _ = cg.project(cam, (4.0 + k, 5.0, 0.0))
            rows.append(cg.GtBox(k, px[0] - 5, px[1] - 5, 10.0, 10.0, True))
        from crbgate.metrics import gt_to_csv

        gt_path = tmp_path / "gt.csv"
        gt_path.write_text(gt_to_csv(rows))
        out_dir = tmp_path / "report"
        code = main(
            ["eval", "--pred", str(gate_out), "--gt", str(gt_path),
             "--camera", "cam0", "--out", str(out_dir)]
        )
        assert code == 0
        summary = json.loads((out_dir / "summary.json").read_text())
        # the search regions should contain the true centers
        assert summary["recall"] == 100.0
