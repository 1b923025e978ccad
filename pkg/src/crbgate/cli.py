"""Command-line front door.

Subcommands mirror the library's studies; report-style commands write a CSV
(or JSONL) artifact plus a rendered figure next to it. Exit codes: 0 ok,
1 runtime failure (structured JSON on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import CrbGateError
from .gate import gate_stream, stream_to_jsonl
from .metrics import (
    auc,
    curve_to_csv,
    default_thresholds,
    load_gt,
    recall_rate,
    success_curve,
)
from .scene import default_targets, scene_from_json
from .simulate import crb_heatmap, run_coverage, run_mse
from .wireless import load_measurements


def _load_scene(path):
    from .errors import ValidationError

    with open(path, "r", encoding="utf-8") as fh:
        try:
            return scene_from_json(json.load(fh))
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON: {exc}") from exc


def _figure_path(out_path) -> Path:
    return Path(out_path).with_suffix(".png")


def _parse_grid(text: str):
    try:
        nx, ny = text.lower().split("x")
        return int(nx), int(ny)
    except ValueError:
        raise CrbGateError(f"grid must look like 40x40, got {text!r}") from None


def _parse_sigmas(text: str):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise CrbGateError(f"bad sigma list {text!r}") from None
    if not values:
        raise CrbGateError("sigma list is empty")
    return values


def _cmd_heatmap(args) -> int:
    scene = _load_scene(args.scene)
    if args.sigma is not None:
        import dataclasses

        from .wireless import GaussianNoise

        scene = dataclasses.replace(scene, noise=GaussianNoise(args.sigma))
    grid = crb_heatmap(scene, _parse_grid(args.grid))
    Path(args.out).write_text(grid.to_csv(), encoding="utf-8")
    fig_path = _figure_path(args.out)
    from . import plots

    plots.save_heatmap_figure(grid, scene, fig_path, sigma=args.sigma)
    print(json.dumps({"out": str(args.out), "figure": str(fig_path)}))
    return 0


def _cmd_simulate(args) -> int:
    scene = _load_scene(args.scene)
    report = run_mse(
        scene,
        _parse_sigmas(args.sigmas),
        args.trials,
        default_targets(scene),
        seed=args.seed,
    )
    Path(args.out).write_text(report.to_csv(), encoding="utf-8")
    fig_path = _figure_path(args.out)
    from . import plots

    plots.save_mse_figure(report, fig_path)
    print(json.dumps({"out": str(args.out), "figure": str(fig_path)}))
    return 0


def _cmd_coverage(args) -> int:
    scene = _load_scene(args.scene)
    value = run_coverage(
        scene, args.alpha, args.trials, default_targets(scene), seed=args.seed
    )
    print(
        json.dumps(
            {"alpha": args.alpha, "trials": args.trials, "coverage": value}
        )
    )
    return 0


def _cmd_gate(args) -> int:
    scene = _load_scene(args.scene)
    frames = load_measurements(args.measurements)
    with open(args.out, "w", encoding="utf-8") as fh:
        for line in stream_to_jsonl(gate_stream(scene, frames, args.alpha)):
            fh.write(line)
    print(json.dumps({"out": str(args.out), "frames": len(frames)}))
    return 0


def _boxes_from_pred(path, camera_id=None):
    """Per-frame predicted boxes from gate JSONL or from box CSV."""
    path = Path(path)
    if path.suffix.lower() in (".jsonl", ".ndjson"):
        from .gate import load_gate_results

        per_frame = []
        for result in load_gate_results(path):
            boxes = [
                r.box.as_xywh()
                for r in result.regions
                if camera_id is None or r.camera_id == camera_id
            ]
            per_frame.append(boxes)
        return per_frame
    rows = load_gt(path)
    return [[r.xywh] if r.present else [] for r in rows]


def _cmd_eval(args) -> int:
    gt = load_gt(args.gt)
    pred = _boxes_from_pred(args.pred, camera_id=args.camera)
    curve = success_curve(pred, gt, default_thresholds())
    score = auc(curve)
    recall = recall_rate(pred, gt)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "curve.csv").write_text(curve_to_csv(curve), encoding="utf-8")
    summary = {"auc": score, "recall": recall}
    (out_dir / "summary.json").write_text(
        json.dumps(summary, indent=2) + "\n", encoding="utf-8"
    )
    from . import plots

    plots.save_success_figure(curve, score, recall, out_dir / "success_plot.png")
    print(json.dumps(summary))
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    ui_dir = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    app = create_app(data_dir=args.data_dir, ui_dir=ui_dir if ui_dir.is_dir() else None)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crbgate",
        description=(
            "Wireless-positioning confidence regions as visual-tracker "
            "search regions: feasibility studies, gating, and evaluation."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("heatmap", help="best-RMSE floor map as CSV + figure")
    p.add_argument("--scene", required=True, help="scene JSON file")
    p.add_argument("--sigma", type=float, default=None, help="override noise std (dBm)")
    p.add_argument("--grid", default="40x40", help="grid as NXxNY")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_heatmap)

    p = sub.add_parser("simulate", help="RMSE/coverage vs noise as CSV + figure")
    p.add_argument("--scene", required=True)
    p.add_argument("--sigmas", default="3,5,7,9,11", help="comma-separated dBm list")
    p.add_argument("--trials", type=int, default=200, help="trials per noise level")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("coverage", help="empirical confidence-region coverage")
    p.add_argument("--scene", required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_coverage)

    p = sub.add_parser("gate", help="turn a measurement stream into search regions")
    p.add_argument("--scene", required=True)
    p.add_argument("--measurements", required=True, help="measurement JSONL")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--out", required=True, help="output JSONL path")
    p.set_defaults(func=_cmd_gate)

    p = sub.add_parser("eval", help="recall / success curve / AUC for predictions")
    p.add_argument("--pred", required=True, help="gate JSONL or box CSV")
    p.add_argument("--gt", required=True, help="ground-truth box CSV")
    p.add_argument("--camera", default=None, help="restrict JSONL regions to one camera")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("serve", help="run the planner HTTP service")
    p.add_argument("--data-dir", default=None, help="scene store directory")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "command", None) == "serve" and args.port is None:
        import os

        args.port = int(os.environ.get("CRBGATE_PORT", "8000"))
    try:
        return args.func(args)
    except CrbGateError as exc:
        print(
            json.dumps({"error": {"code": type(exc).__name__, "message": str(exc)}}),
            file=sys.stderr,
        )
        return 1
    except OSError as exc:
        print(
            json.dumps({"error": {"code": "OSError", "message": str(exc)}}),
            file=sys.stderr,
        )
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
