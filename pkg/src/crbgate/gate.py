"""Per-frame gating pipeline: measurements -> estimate -> plug-in confidence
region -> projected per-camera search regions.

Gating is deliberately memoryless: every frame is handled on its own, so one
bad frame cannot poison the next (the stream keeps going and bad frames come
out as structured error records).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional

import numpy as np

from .camera import PixelBox, project, project_region
from .crb import ConfidenceEllipse, confidence_ellipse, ellipse_from_json, ellipse_to_json, fim
from .errors import (
    BehindCamera,
    DegenerateDistance,
    InsufficientAnchors,
    RegionOutsideImage,
    SingularFim,
    StreamOrderViolation,
    UnknownAnchor,
    ValidationError,
)
from .estimator import EstimatorConfig, solve
from .scene import Scene
from .simulate import _scene_config
from .wireless import MeasurementFrame, TargetState, jacobian, noise_information


@dataclass(frozen=True)
class SearchRegion:
    """What a visual tracker receives for one camera and one frame."""

    frame_t: float
    camera_id: str
    estimate_xy: np.ndarray
    ellipse: ConfidenceEllipse
    polygon_px: np.ndarray
    box: PixelBox
    level_alpha: float


@dataclass(frozen=True)
class FrameResult:
    """One stream record: the frame's regions, or a structured error."""

    t: float
    regions: tuple = ()
    error: Optional[dict] = None


# Frame-level problems become stream records, never stream aborts.
_FRAME_ERRORS = (
    InsufficientAnchors,
    SingularFim,
    UnknownAnchor,
    DegenerateDistance,
    ValidationError,
)


def gate_frame(
    scene: Scene,
    frame: MeasurementFrame,
    alpha: float = 0.05,
    config: Optional[EstimatorConfig] = None,
) -> List[SearchRegion]:
    """Search regions for one frame, one per camera that sees the region.

    The information matrix is evaluated at the estimate (the truth is not
    available at runtime). Cameras for which the projection fails - region
    behind the camera or outside the image - are skipped, in scene order.
    """
    cfg = _scene_config(scene, config)
    est = solve(scene.anchors, frame, scene.noise, cfg)
    i_v = noise_information(scene.noise, mc_samples=200_000, seed=0)
    f_hat = fim(jacobian(scene.anchors, TargetState(est.xy)), i_v)
    ellipse = confidence_ellipse(est.xy, f_hat, alpha)
    ground_point = np.array([est.xy[0], est.xy[1], 0.0])
    regions = []
    for camera in scene.cameras:
        try:
            pixel, _ = project(camera, ground_point)
        except BehindCamera:
            continue
        w, h = camera.image_size
        if not (0.0 <= pixel[0] <= w and 0.0 <= pixel[1] <= h):
            continue
        try:
            polygon, box = project_region(
                camera, ellipse, z_levels=(0.0, scene.person_height)
            )
        except (BehindCamera, RegionOutsideImage):
            continue
        regions.append(
            SearchRegion(
                frame_t=frame.timestamp,
                camera_id=camera.id,
                estimate_xy=est.xy,
                ellipse=ellipse,
                polygon_px=polygon,
                box=box,
                level_alpha=float(alpha),
            )
        )
    return regions


def gate_stream(
    scene: Scene,
    frames: Iterable[MeasurementFrame],
    alpha: float = 0.05,
    config: Optional[EstimatorConfig] = None,
) -> Iterator[FrameResult]:
    """Lazily gate a time-ordered frame stream.

    Timestamps must be non-decreasing. Per-frame failures are yielded as
    error records so long-running streams survive bad frames.
    """
    last_t = None
    for frame in frames:
        if last_t is not None and frame.timestamp < last_t:
            raise StreamOrderViolation(
                f"timestamp {frame.timestamp} after {last_t}"
            )
        last_t = frame.timestamp
        try:
            regions = gate_frame(scene, frame, alpha, config)
        except _FRAME_ERRORS as exc:
            yield FrameResult(
                t=frame.timestamp,
                regions=(),
                error={"kind": type(exc).__name__, "message": str(exc)},
            )
            continue
        yield FrameResult(t=frame.timestamp, regions=tuple(regions))


def region_to_json(region: SearchRegion) -> dict:
    return {
        "camera_id": region.camera_id,
        "estimate": [float(v) for v in region.estimate_xy],
        "ellipse": ellipse_to_json(region.ellipse),
        "polygon": [[float(u), float(v)] for u, v in region.polygon_px],
        "box": [
            region.box.x_min,
            region.box.y_min,
            region.box.x_max,
            region.box.y_max,
        ],
        "alpha": region.level_alpha,
    }


def result_to_json(result: FrameResult) -> dict:
    return {
        "t": result.t,
        "regions": [region_to_json(r) for r in result.regions],
        "error": result.error,
    }


def result_from_json(obj: dict) -> FrameResult:
    try:
        regions = []
        for r in obj.get("regions", []):
            x0, y0, x1, y1 = (float(v) for v in r["box"])
            regions.append(
                SearchRegion(
                    frame_t=float(obj["t"]),
                    camera_id=str(r["camera_id"]),
                    estimate_xy=np.asarray(r["estimate"], dtype=float),
                    ellipse=ellipse_from_json(r["ellipse"]),
                    polygon_px=np.asarray(r["polygon"], dtype=float).reshape(-1, 2),
                    box=PixelBox(x0, y0, x1, y1),
                    level_alpha=float(r["alpha"]),
                )
            )
        return FrameResult(
            t=float(obj["t"]), regions=tuple(regions), error=obj.get("error")
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad gate record: {exc}") from exc


def stream_to_jsonl(results: Iterable[FrameResult]) -> Iterator[str]:
    for result in results:
        yield json.dumps(result_to_json(result)) + "\n"


def load_gate_results(path) -> list:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(result_from_json(json.loads(line)))
    return out
