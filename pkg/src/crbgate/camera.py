"""Pinhole projection of world points and confidence regions to pixels.

Pure pinhole: no distortion model. Calibration records carrying distortion
terms are rejected at load time rather than silently ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .crb import ConfidenceEllipse
from .errors import BehindCamera, RegionOutsideImage, ValidationError

# A point is "in front" when its depth along the optical axis exceeds this.
_S_MIN = 1e-9

_CAMERA_KEYS = {"id", "K", "R", "T", "image_size"}


@dataclass(frozen=True, eq=False)
class CameraModel:
    """Calibrated camera: intrinsics K, pose (R, T), sensor size in pixels."""

    id: str
    intrinsics_k: np.ndarray
    rotation_r: np.ndarray
    translation_t: np.ndarray
    image_size: Tuple[int, int]

    def __post_init__(self):
        k = np.asarray(self.intrinsics_k, dtype=float).reshape(3, 3)
        r = np.asarray(self.rotation_r, dtype=float).reshape(3, 3)
        t = np.asarray(self.translation_t, dtype=float).reshape(3)
        if np.abs(r.T @ r - np.eye(3)).max() > 1e-9 or abs(np.linalg.det(r) - 1.0) > 1e-9:
            raise ValidationError(
                f"camera {self.id!r}: R must be a proper rotation matrix"
            )
        if np.abs(k[np.tril_indices(3, k=-1)]).max() > 0:
            raise ValidationError(f"camera {self.id!r}: K must be upper triangular")
        if np.diag(k).min() <= 0:
            raise ValidationError(
                f"camera {self.id!r}: K needs a positive diagonal"
            )
        w, h = self.image_size
        if w <= 0 or h <= 0:
            raise ValidationError(f"camera {self.id!r}: bad image size")
        object.__setattr__(self, "intrinsics_k", k)
        object.__setattr__(self, "rotation_r", r)
        object.__setattr__(self, "translation_t", t)
        object.__setattr__(self, "image_size", (int(w), int(h)))

    @property
    def projection_matrix(self) -> np.ndarray:
        """The 3x4 matrix K [R | T]."""
        return self.intrinsics_k @ np.hstack(
            [self.rotation_r, self.translation_t[:, None]]
        )


@dataclass(frozen=True)
class PixelBox:
    """Axis-aligned pixel box; ``clipped`` marks clamping to image bounds."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float
    clipped: bool = False

    def __post_init__(self):
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise ValidationError("box extents must be ordered")

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    def as_xywh(self) -> tuple:
        return (self.x_min, self.y_min, self.width, self.height)

    def contains_point(self, u: float, v: float) -> bool:
        return self.x_min <= u <= self.x_max and self.y_min <= v <= self.y_max

    def contains_box(self, other: "PixelBox") -> bool:
        return (
            self.x_min <= other.x_min
            and self.y_min <= other.y_min
            and self.x_max >= other.x_max
            and self.y_max >= other.y_max
        )


def project(camera: CameraModel, world_point) -> Tuple[np.ndarray, float]:
    """World point to (pixel, depth scale s).

    The scale is the third homogeneous coordinate of K [R | T] applied to the
    point; it is computed per point, never treated as a calibration constant.
    """
    p = np.asarray(world_point, dtype=float).reshape(3)
    h = camera.intrinsics_k @ (camera.rotation_r @ p + camera.translation_t)
    s = float(h[2])
    if s <= _S_MIN:
        raise BehindCamera(
            f"camera {camera.id!r}: point has depth scale {s:.3g}"
        )
    return h[:2] / s, s


def unproject(camera: CameraModel, pixel, depth_s: float) -> np.ndarray:
    """Invert ``project`` for a known depth scale along the pixel ray."""
    u, v = (float(c) for c in np.asarray(pixel, dtype=float).reshape(2))
    cam = np.linalg.solve(camera.intrinsics_k, np.array([u, v, 1.0]) * depth_s)
    return camera.rotation_r.T @ (cam - camera.translation_t)


def convex_hull(points: np.ndarray) -> np.ndarray:
    """Convex hull of 2D points, counterclockwise (monotone chain).

    Degenerate inputs are tolerated: coincident points collapse to one row
    and collinear points to their two extremes.
    """
    pts = np.unique(np.asarray(points, dtype=float).reshape(-1, 2), axis=0)
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:  # all collinear
        return np.stack([pts[0], pts[-1]])
    return np.stack(hull)


def project_region(
    camera: CameraModel,
    ellipse: ConfidenceEllipse,
    z_levels: Sequence[float] = (0.0, 1.8),
    n_points: int = 64,
) -> Tuple[np.ndarray, PixelBox]:
    """Project the region's boundary, extruded to each z level, into pixels.

    A person occupies a vertical extent, so the planar region is stamped at
    ground level and head height and the convex hull of all projected
    boundary points becomes the search polygon. The returned box is the
    hull's bounding box clamped to the image rectangle.
    """
    if len(z_levels) < 1:
        raise ValidationError("need at least one z level")
    boundary = ellipse.boundary(n_points)  # (n, 2)
    pts = []
    for z in z_levels:
        layer = np.column_stack(
            [boundary, np.full(len(boundary), float(z)), np.ones(len(boundary))]
        )
        pts.append(layer)
    homo = np.vstack(pts)  # (n * L, 4)
    img = camera.projection_matrix @ homo.T  # (3, m)
    s = img[2]
    front = s > _S_MIN
    if not front.any():
        raise BehindCamera(
            f"camera {camera.id!r}: region is entirely behind the camera"
        )
    px = (img[:2, front] / s[front]).T
    polygon = convex_hull(px)

    x0, y0 = float(px[:, 0].min()), float(px[:, 1].min())
    x1, y1 = float(px[:, 0].max()), float(px[:, 1].max())
    w, h = camera.image_size
    if x1 < 0 or y1 < 0 or x0 > w or y0 > h:
        raise RegionOutsideImage(
            f"camera {camera.id!r}: region box [{x0:.1f},{y0:.1f},{x1:.1f},{y1:.1f}] "
            f"misses the {w}x{h} image"
        )
    cx0, cy0 = max(x0, 0.0), max(y0, 0.0)
    cx1, cy1 = min(x1, float(w)), min(y1, float(h))
    clipped = (cx0, cy0, cx1, cy1) != (x0, y0, x1, y1)
    box = PixelBox(cx0, cy0, cx1, cy1, clipped=clipped)
    return polygon, box


def camera_to_json(camera: CameraModel) -> dict:
    return {
        "id": camera.id,
        "K": [[float(v) for v in row] for row in camera.intrinsics_k],
        "R": [[float(v) for v in row] for row in camera.rotation_r],
        "T": [float(v) for v in camera.translation_t],
        "image_size": list(camera.image_size),
    }


def camera_from_json(obj: dict) -> CameraModel:
    if not isinstance(obj, dict):
        raise ValidationError("camera record must be an object")
    extra = set(obj) - _CAMERA_KEYS
    if extra:
        raise ValidationError(
            f"camera record has unsupported fields {sorted(extra)}; "
            "distortion terms are not supported (pure pinhole model)"
        )
    missing = _CAMERA_KEYS - set(obj)
    if missing:
        raise ValidationError(f"camera record missing fields {sorted(missing)}")
    try:
        return CameraModel(
            id=str(obj["id"]),
            intrinsics_k=np.asarray(obj["K"], dtype=float),
            rotation_r=np.asarray(obj["R"], dtype=float),
            translation_t=np.asarray(obj["T"], dtype=float),
            image_size=(int(obj["image_size"][0]), int(obj["image_size"][1])),
        )
    except (TypeError, ValueError, IndexError) as exc:
        raise ValidationError(f"bad camera record: {exc}") from exc
