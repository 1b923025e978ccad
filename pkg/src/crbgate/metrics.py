"""Tracking evaluation metrics: recall of the search region, overlap success
curves and their AUC.

Boxes are (x, y, w, h) in pixels with the origin at the top-left corner.
Frames where the target is absent are excluded from every denominator;
penalizing unavoidable absence would mix detection into a tracking score.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .camera import PixelBox
from .errors import DomainError, EmptyCurve, LengthMismatch, ValidationError


@dataclass(frozen=True)
class GtBox:
    """Ground-truth annotation for one frame."""

    frame_index: int
    x: float
    y: float
    w: float
    h: float
    present: bool = True

    def __post_init__(self):
        object.__setattr__(self, "frame_index", int(self.frame_index))
        for name in ("x", "y", "w", "h"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "present", bool(self.present))
        if self.w < 0 or self.h < 0:
            raise ValidationError("box extents must be non-negative")

    @property
    def center(self) -> Tuple[float, float]:
        return (self.x + self.w / 2.0, self.y + self.h / 2.0)

    @property
    def xywh(self) -> Tuple[float, float, float, float]:
        return (self.x, self.y, self.w, self.h)


def iou(a, b) -> float:
    """Intersection over union of two (x, y, w, h) boxes; 0 when the union
    is empty.

    Every area is derived from the same interval endpoints, which keeps the
    ratio in [0, 1] under floating point and makes iou(a, a) exactly 1.
    """
    ax, ay, aw, ah = (float(v) for v in a)
    bx, by, bw, bh = (float(v) for v in b)
    if min(aw, ah, bw, bh) < 0:
        raise ValidationError("box extents must be non-negative")
    ax2, ay2 = ax + aw, ay + ah
    bx2, by2 = bx + bw, by + bh
    iw = min(ax2, bx2) - max(ax, bx)
    ih = min(ay2, by2) - max(ay, by)
    inter = max(iw, 0.0) * max(ih, 0.0)
    union = (ax2 - ax) * (ay2 - ay) + (bx2 - bx) * (by2 - by) - inter
    if union <= 0.0:
        return 0.0
    return inter / union


def _norm_boxes(entry) -> list:
    """One frame's predictions as a list of (x, y, w, h) tuples."""
    if entry is None:
        return []
    if isinstance(entry, PixelBox):
        return [entry.as_xywh()]
    if isinstance(entry, GtBox):
        return [entry.xywh]
    if isinstance(entry, (list, tuple)) and len(entry) == 4 and all(
        isinstance(v, (int, float, np.floating, np.integer)) for v in entry
    ):
        return [tuple(float(v) for v in entry)]
    out = []
    for item in entry:
        out.extend(_norm_boxes(item))
    return out


def recall_rate(regions: Sequence, gt: Sequence[GtBox]) -> float:
    """Percentage of present frames whose region contains the truth's center.

    ``regions`` holds one entry per frame: a box, a list of boxes (one per
    camera), or None when nothing was emitted. A frame counts as a hit when
    any of its boxes contains the ground-truth center.
    """
    if len(regions) != len(gt):
        raise LengthMismatch(
            f"{len(regions)} region entries vs {len(gt)} ground-truth rows"
        )
    present = 0
    hits = 0
    for entry, truth in zip(regions, gt):
        if not truth.present:
            continue
        present += 1
        cx, cy = truth.center
        for bx, by, bw, bh in _norm_boxes(entry):
            if bx <= cx <= bx + bw and by <= cy <= by + bh:
                hits += 1
                break
    if present == 0:
        return 0.0
    return 100.0 * hits / present


def default_thresholds(n: int = 101) -> np.ndarray:
    return np.linspace(0.0, 1.0, n)


def success_curve(
    pred: Sequence, gt: Sequence[GtBox], thresholds: Optional[Sequence[float]] = None
) -> List[Tuple[float, float]]:
    """Overlap success rate at each threshold.

    The per-frame overlap score is the best IoU between the frame's
    predicted boxes and the ground truth (0 when nothing was predicted);
    osr(t) is the fraction of present frames scoring strictly above t.
    """
    if len(pred) != len(gt):
        raise LengthMismatch(
            f"{len(pred)} prediction entries vs {len(gt)} ground-truth rows"
        )
    if thresholds is None:
        thresholds = default_thresholds()
    thresholds = [float(t) for t in thresholds]
    if any(b < a for a, b in zip(thresholds, thresholds[1:])):
        raise DomainError("thresholds must be sorted ascending")
    scores = []
    for entry, truth in zip(pred, gt):
        if not truth.present:
            continue
        boxes = _norm_boxes(entry)
        scores.append(max((iou(b, truth.xywh) for b in boxes), default=0.0))
    scores = np.asarray(scores)
    curve = []
    for t in thresholds:
        osr = float(np.mean(scores > t)) if len(scores) else 0.0
        curve.append((t, osr))
    return curve


def auc(curve: Sequence[Tuple[float, float]]) -> float:
    """Area under the success curve, normalized by the threshold span."""
    if len(curve) < 2:
        raise EmptyCurve("need at least two curve points")
    t = np.array([p[0] for p in curve])
    v = np.array([p[1] for p in curve])
    span = float(t[-1] - t[0])
    if span <= 0:
        raise EmptyCurve("threshold span is empty")
    return float(np.trapezoid(v, t) / span)


# --- file interfaces ---------------------------------------------------------
# Ground truth and box predictions: CSV rows frame_index,x,y,w,h,present.


def gt_to_csv(rows: Sequence[GtBox]) -> str:
    buf = io.StringIO()
    buf.write("frame_index,x,y,w,h,present\n")
    for r in rows:
        buf.write(
            f"{r.frame_index},{r.x!r},{r.y!r},{r.w!r},{r.h!r},{int(r.present)}\n"
        )
    return buf.getvalue()


def gt_from_csv(text: str) -> List[GtBox]:
    rows = []
    reader = csv.reader(io.StringIO(text))
    for i, rec in enumerate(reader):
        if not rec or not "".join(rec).strip():
            continue
        if i == 0 and rec[0].strip().lower() == "frame_index":
            continue
        if len(rec) != 6:
            raise ValidationError(
                f"row {i + 1}: expected frame_index,x,y,w,h,present"
            )
        try:
            rows.append(
                GtBox(
                    frame_index=int(rec[0]),
                    x=float(rec[1]),
                    y=float(rec[2]),
                    w=float(rec[3]),
                    h=float(rec[4]),
                    present=bool(int(rec[5])),
                )
            )
        except ValueError as exc:
            raise ValidationError(f"row {i + 1}: {exc}") from exc
    return rows


def load_gt(path) -> List[GtBox]:
    with open(path, "r", encoding="utf-8") as fh:
        return gt_from_csv(fh.read())


def curve_to_csv(curve: Sequence[Tuple[float, float]]) -> str:
    buf = io.StringIO()
    buf.write("threshold,osr\n")
    for t, v in curve:
        buf.write(f"{t!r},{v!r}\n")
    return buf.getvalue()
