"""Deployment scenes: anchors, cameras, noise and the area of interest.

The JSON schema is the persistence and wire format:

    {"anchors": [{"id", "position": [x, y, z], "A", "B"}, ...],
     "cameras": [...],
     "noise": {"type": "gaussian", "sigma": ...},
     "bounds": [x0, y0, x1, y1],
     "person_height": ...}

All numbers are SI (meters, dBm).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .camera import CameraModel, camera_from_json, camera_to_json
from .errors import ValidationError
from .wireless import Anchor, GaussianNoise, NoiseModel

_ANCHOR_KEYS = {"id", "position", "A", "B"}
_SCENE_KEYS = {"anchors", "cameras", "noise", "bounds", "person_height"}


@dataclass(frozen=True)
class Scene:
    """Immutable deployment description used by every scene-level study."""

    anchors: tuple = field(default_factory=tuple)
    cameras: tuple = field(default_factory=tuple)
    noise: NoiseModel = GaussianNoise(3.0)
    bounds: Tuple[float, float, float, float] = (0.0, 0.0, 10.0, 10.0)
    person_height: float = 1.8

    def __post_init__(self):
        object.__setattr__(self, "anchors", tuple(self.anchors))
        object.__setattr__(self, "cameras", tuple(self.cameras))
        x0, y0, x1, y1 = (float(v) for v in self.bounds)
        if not all(map(math.isfinite, (x0, y0, x1, y1))) or x1 <= x0 or y1 <= y0:
            raise ValidationError("bounds must be a non-degenerate rectangle")
        object.__setattr__(self, "bounds", (x0, y0, x1, y1))
        if not (math.isfinite(self.person_height) and self.person_height > 0):
            raise ValidationError("person_height must be > 0")
        ids = [a.id for a in self.anchors]
        if len(set(ids)) != len(ids):
            raise ValidationError("anchor ids must be unique")
        cids = [c.id for c in self.cameras]
        if len(set(cids)) != len(cids):
            raise ValidationError("camera ids must be unique")


def scene_to_json(scene: Scene) -> dict:
    if not isinstance(scene.noise, GaussianNoise):
        raise ValidationError(
            "only Gaussian noise serializes to scene JSON; empirical models "
            "are code-level"
        )
    return {
        "anchors": [
            {
                "id": a.id,
                "position": [float(v) for v in a.position],
                "A": a.path_loss_a,
                "B": a.path_loss_b,
            }
            for a in scene.anchors
        ],
        "cameras": [camera_to_json(c) for c in scene.cameras],
        "noise": {"type": "gaussian", "sigma": scene.noise.sigma},
        "bounds": list(scene.bounds),
        "person_height": scene.person_height,
    }


def _anchor_from_json(obj: dict) -> Anchor:
    if not isinstance(obj, dict):
        raise ValidationError("anchor record must be an object")
    extra = set(obj) - _ANCHOR_KEYS
    if extra:
        raise ValidationError(f"anchor record has unknown fields {sorted(extra)}")
    missing = _ANCHOR_KEYS - set(obj)
    if missing:
        raise ValidationError(f"anchor record missing fields {sorted(missing)}")
    try:
        return Anchor(
            id=str(obj["id"]),
            position=np.asarray(obj["position"], dtype=float).reshape(3),
            path_loss_a=float(obj["A"]),
            path_loss_b=float(obj["B"]),
        )
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad anchor record: {exc}") from exc


def scene_from_json(obj: dict) -> Scene:
    if not isinstance(obj, dict):
        raise ValidationError("scene must be a JSON object")
    extra = set(obj) - _SCENE_KEYS
    if extra:
        raise ValidationError(f"scene has unknown fields {sorted(extra)}")
    for key in ("anchors", "noise", "bounds"):
        if key not in obj:
            raise ValidationError(f"scene missing field {key!r}")
    noise_obj = obj["noise"]
    if not isinstance(noise_obj, dict) or noise_obj.get("type") != "gaussian":
        raise ValidationError('noise must be {"type": "gaussian", "sigma": ...}')
    try:
        noise = GaussianNoise(float(noise_obj["sigma"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad noise record: {exc}") from exc
    anchors = tuple(_anchor_from_json(a) for a in obj["anchors"])
    cameras = tuple(camera_from_json(c) for c in obj.get("cameras", []))
    bounds = obj["bounds"]
    if not (isinstance(bounds, (list, tuple)) and len(bounds) == 4):
        raise ValidationError("bounds must be [x0, y0, x1, y1]")
    return Scene(
        anchors=anchors,
        cameras=cameras,
        noise=noise,
        bounds=tuple(float(v) for v in bounds),
        person_height=float(obj.get("person_height", 1.8)),
    )


def perimeter_anchors(
    n: int = 32,
    bounds: Tuple[float, float, float, float] = (0.0, 0.0, 8.0, 8.0),
    height: float = 3.0,
    path_loss_a: float = -45.0,
    path_loss_b: float = -2.0,
) -> tuple:
    """n anchors evenly spaced along the rectangle outline, mounted at height."""
    x0, y0, x1, y1 = bounds
    w, h = x1 - x0, y1 - y0
    per = 2.0 * (w + h)
    anchors = []
    for k in range(n):
        s = k * per / n
        if s < w:
            x, y = x0 + s, y0
        elif s < w + h:
            x, y = x1, y0 + (s - w)
        elif s < 2 * w + h:
            x, y = x1 - (s - w - h), y1
        else:
            x, y = x0, y1 - (s - 2 * w - h)
        anchors.append(
            Anchor(f"a{k:02d}", np.array([x, y, height]), path_loss_a, path_loss_b)
        )
    return tuple(anchors)


def overhead_camera(
    camera_id: str = "cam0",
    bounds: Tuple[float, float, float, float] = (0.0, 0.0, 10.0, 10.0),
    height: float = 12.0,
    image_size: Tuple[int, int] = (1280, 960),
    focal_px: float = 900.0,
) -> CameraModel:
    """A downward-looking camera centered over the area of interest.

    Its optical axis points along -z of the world (straight down), so ground
    points project with depth equal to the camera height.
    """
    x0, y0, x1, y1 = bounds
    cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
    # World-to-camera: x stays, y flips, z flips; a proper rotation that
    # makes the camera's +z axis look down at the floor.
    r = np.array([[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]])
    t = -r @ np.array([cx, cy, height])
    w, h = image_size
    k = np.array(
        [[focal_px, 0.0, w / 2.0], [0.0, focal_px, h / 2.0], [0.0, 0.0, 1.0]]
    )
    return CameraModel(
        id=camera_id,
        intrinsics_k=k,
        rotation_r=r,
        translation_t=t,
        image_size=image_size,
    )


def default_scene(
    n_anchors: int = 32,
    side: float = 8.0,
    sigma: float = 3.0,
    anchor_height: float = 3.0,
    with_camera: bool = True,
) -> Scene:
    """The stock study scene: a 32-beacon ring around a square room.

    An 8 m room with ceiling-height beacons keeps the estimator in the
    near-efficient regime across the studied noise range; larger rooms (or
    low-mounted beacons) push the high-noise runs into the regime where
    least-squares nonlinearity breaks the linear RMSE-vs-sigma scaling that
    the bound predicts.
    """
    bounds = (0.0, 0.0, float(side), float(side))
    cameras = (overhead_camera(bounds=bounds, height=side * 1.2),) if with_camera else ()
    return Scene(
        anchors=perimeter_anchors(n_anchors, bounds, anchor_height),
        cameras=cameras,
        noise=GaussianNoise(sigma),
        bounds=bounds,
        person_height=1.8,
    )


def default_targets(scene: Scene, per_axis: int = 3) -> list:
    """Deterministic interior probe targets: a per_axis^2 grid at 25-75%."""
    x0, y0, x1, y1 = scene.bounds
    fr = np.linspace(0.25, 0.75, per_axis)
    return [
        np.array([x0 + fx * (x1 - x0), y0 + fy * (y1 - y0)])
        for fy in fr
        for fx in fr
    ]
