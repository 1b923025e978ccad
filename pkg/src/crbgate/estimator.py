"""Least-squares position estimation from one RSS frame.

The objective is the sum of squared differences between observed and
predicted RSS. It is minimized by damped Gauss-Newton (Levenberg-style: the
damping grows tenfold on a rejected step and shrinks tenfold on an accepted
one), restarted from several deterministic initial guesses because the
objective is multimodal for poor anchor geometries. Frames may omit anchors;
only present readings enter the objective.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import (
    DegenerateDistance,
    InsufficientAnchors,
    UnknownAnchor,
    ValidationError,
)
from .wireless import (
    D_MIN,
    _LOG10_GAIN,
    Anchor,
    MeasurementFrame,
    NoiseModel,
    TargetState,
)

_GRID_SIDE = 8          # coarse initialization grid is _GRID_SIDE^2 cells
_DAMPING_MAX = 1e12     # give up on an iterate once damping exceeds this
_DAMPING_MIN = 1e-12


@dataclass(frozen=True)
class EstimatorConfig:
    """Solver knobs; the defaults are robust for room-scale scenes.

    ``grid_extent`` bounds the coarse initialization grid as
    (x0, y0, x1, y1); when None the anchors' bounding box is used.
    """

    max_iterations: int = 100
    step_tolerance: float = 1e-9
    residual_tolerance: float = 1e-12
    multistart_count: int = 5
    damping_init: float = 1e-3
    grid_extent: Optional[tuple] = None

    def __post_init__(self):
        if self.max_iterations < 1 or self.multistart_count < 1:
            raise ValidationError("iteration and start counts must be >= 1")
        if min(self.step_tolerance, self.residual_tolerance, self.damping_init) <= 0:
            raise ValidationError("tolerances and damping must be > 0")
        if self.grid_extent is not None:
            x0, y0, x1, y1 = (float(v) for v in self.grid_extent)
            if not (x1 > x0 and y1 > y0):
                raise ValidationError("grid_extent must be a non-degenerate box")
            object.__setattr__(self, "grid_extent", (x0, y0, x1, y1))


@dataclass(frozen=True, eq=False)
class PositionEstimate:
    xy: np.ndarray
    residual_norm: float
    iterations: int
    converged: bool
    start_index: int


class _Problem:
    """Frame readings resolved against the anchor list, as flat arrays."""

    def __init__(self, anchors: Sequence[Anchor], frame: MeasurementFrame):
        by_id = {a.id: a for a in anchors}
        if len(by_id) != len(anchors):
            raise ValidationError("anchor ids must be unique")
        matched = []
        for aid, rss in frame.readings:
            if aid not in by_id:
                raise UnknownAnchor(f"frame references unknown anchor {aid!r}")
            matched.append((by_id[aid], rss))
        self.n = len(matched)
        self.pos = np.array([a.position for a, _ in matched]).reshape(self.n, 3)
        self.pl_a = np.array([a.path_loss_a for a, _ in matched])
        self.pl_b = np.array([a.path_loss_b for a, _ in matched])
        self.obs = np.array([r for _, r in matched])
        self.ids = [a.id for a, _ in matched]

    def distances(self, xy: np.ndarray, z: float):
        dx = xy[0] - self.pos[:, 0]
        dy = xy[1] - self.pos[:, 1]
        dz = z - self.pos[:, 2]
        return dx, dy, np.sqrt(dx * dx + dy * dy + dz * dz)

    def eval(self, xy: np.ndarray, z: float):
        """(ssq, residual vector, jacobian (2, N)); None when degenerate."""
        dx, dy, d = self.distances(xy, z)
        if d.min() < D_MIN:
            return None
        r = self.obs - (self.pl_a + 10.0 * self.pl_b * np.log10(d))
        d2 = d * d
        jac = _LOG10_GAIN * self.pl_b * np.stack([dx, dy]) / d2
        return float(r @ r), r, jac

    def ssq(self, xy: np.ndarray, z: float) -> float:
        dx, dy, d = self.distances(xy, z)
        if d.min() < D_MIN:
            return math.inf
        r = self.obs - (self.pl_a + 10.0 * self.pl_b * np.log10(d))
        return float(r @ r)

    def ssq_many(self, pts: np.ndarray, z: float) -> np.ndarray:
        """Objective at each row of pts (m, 2); inf where degenerate."""
        diff = pts[:, None, :] - self.pos[None, :, :2]  # (m, N, 2)
        dz = z - self.pos[:, 2]
        d = np.sqrt(np.einsum("mni,mni->mn", diff, diff) + dz * dz)
        with np.errstate(divide="ignore", invalid="ignore"):
            pred = self.pl_a + 10.0 * self.pl_b * np.log10(d)
        r = self.obs - pred
        out = np.einsum("mn,mn->m", r, r)
        out[(d < D_MIN).any(axis=1)] = math.inf
        return out


def residuals(
    anchors: Sequence[Anchor], frame: MeasurementFrame, target: TargetState
) -> np.ndarray:
    """Observed minus predicted RSS for every reading, in frame order."""
    prob = _Problem(anchors, frame)
    res = prob.eval(target.xy, target.z_fixed)
    if res is None:
        dx, dy, d = prob.distances(target.xy, target.z_fixed)
        i = int(np.argmin(d))
        raise DegenerateDistance(prob.ids[i], float(d[i]))
    return res[1]


def _grid_centers(extent, side: int = _GRID_SIDE) -> np.ndarray:
    x0, y0, x1, y1 = extent
    xs = x0 + (np.arange(side) + 0.5) * (x1 - x0) / side
    ys = y0 + (np.arange(side) + 0.5) * (y1 - y0) / side
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    return np.stack([gx.ravel(), gy.ravel()], axis=1)


def _anchor_extent(pos: np.ndarray):
    x0, y0 = pos[:, 0].min(), pos[:, 1].min()
    x1, y1 = pos[:, 0].max(), pos[:, 1].max()
    if x1 - x0 < 1.0:  # degenerate layouts still get a usable grid
        x0, x1 = x0 - 1.0, x1 + 1.0
    if y1 - y0 < 1.0:
        y0, y1 = y0 - 1.0, y1 + 1.0
    return (float(x0), float(y0), float(x1), float(y1))


def initial_guesses(
    anchors: Sequence[Anchor],
    frame: MeasurementFrame,
    config: EstimatorConfig = EstimatorConfig(),
    z_fixed: float = 0.0,
) -> list:
    """Deterministic multistart points.

    In order: the strongest-RSS anchor's (x, y); the anchor centroid weighted
    by inverse linearized distance; then the best cells of a coarse grid over
    ``grid_extent`` ranked by objective value.
    """
    prob = _Problem(anchors, frame)
    if prob.n < 1:
        raise ValidationError("frame has no readings")
    guesses = []

    strongest = int(np.argmax(prob.obs))
    guesses.append(prob.pos[strongest, :2].copy())

    if config.multistart_count >= 2:
        # Invert the path-loss model per reading for a rough distance, then
        # pull the centroid toward the nearest-looking anchors.
        expo = (prob.obs - prob.pl_a) / (10.0 * prob.pl_b)
        dist = np.power(10.0, np.clip(expo, -12.0, 12.0))
        w = 1.0 / np.maximum(dist, D_MIN)
        guesses.append((w @ prob.pos[:, :2]) / w.sum())

    if config.multistart_count >= 3:
        extent = config.grid_extent or _anchor_extent(prob.pos)
        cells = _grid_centers(extent)
        scores = prob.ssq_many(cells, z_fixed)
        order = np.argsort(scores, kind="stable")
        for k in order[: config.multistart_count - 2]:
            guesses.append(cells[int(k)].copy())

    return guesses


def _gauss_newton(prob: _Problem, start: np.ndarray, z: float, config: EstimatorConfig):
    """One damped Gauss-Newton run; returns (xy, ssq, iterations, converged)."""
    x = np.asarray(start, dtype=float).copy()
    # A start placed exactly on an anchor sits on the objective's pole;
    # nudge it deterministically until the objective is finite.
    f0 = prob.ssq(x, z)
    bump = 2.0 * D_MIN
    while not math.isfinite(f0):
        x = x + bump
        f0 = prob.ssq(x, z)
        bump *= 2.0
        if bump > 1e3:
            return x, math.inf, 0, False

    lam = config.damping_init
    eye = np.eye(2)
    # an exact fit cannot strictly decrease further, so it counts as converged
    converged = f0 == 0.0
    it = 0
    while not converged and it < config.max_iterations:
        it += 1
        res = prob.eval(x, z)
        if res is None:
            break
        _, r, jac = res
        gram = jac @ jac.T
        grad = jac @ r
        try:
            step = np.linalg.solve(gram + lam * eye, grad)
        except np.linalg.LinAlgError:
            lam *= 10.0
            if lam > _DAMPING_MAX:
                break
            continue
        trial = x + step
        f1 = prob.ssq(trial, z)
        if f1 < f0:
            x = trial
            rel_drop = (f0 - f1) / max(f0, 1e-300)
            f0 = f1
            lam = max(lam / 10.0, _DAMPING_MIN)
            if f0 == 0.0:
                converged = True
                break
            if float(np.linalg.norm(step)) <= config.step_tolerance:
                converged = True
                break
            if rel_drop <= config.residual_tolerance:
                converged = True
                break
        else:
            lam *= 10.0
            if lam > _DAMPING_MAX:
                break
    return x, f0, it, converged


def solve(
    anchors: Sequence[Anchor],
    frame: MeasurementFrame,
    noise: NoiseModel = None,
    config: EstimatorConfig = EstimatorConfig(),
    z_fixed: float = 0.0,
) -> PositionEstimate:
    """Best least-squares position across all multistart runs.

    The winner is the start with the lowest final residual norm, ties broken
    by the lowest start index, which makes the result deterministic. The
    noise model is accepted for interface symmetry: i.i.d. noise makes the
    maximum-likelihood weights uniform, so it does not enter the objective.
    A failed line search is not an error; the best iterate is returned with
    ``converged=False``.
    """
    prob = _Problem(anchors, frame)
    if prob.n < 3:
        raise InsufficientAnchors(
            f"need at least 3 readings to fix a 2D position, got {prob.n}"
        )
    starts = initial_guesses(anchors, frame, config, z_fixed)
    best = None
    for idx, start in enumerate(starts):
        xy, ssq, iters, conv = _gauss_newton(prob, start, z_fixed, config)
        if best is None or ssq < best[1]:
            best = (xy, ssq, iters, conv, idx)
    xy, ssq, iters, conv, idx = best
    return PositionEstimate(
        xy=xy,
        residual_norm=float(math.sqrt(ssq)) if math.isfinite(ssq) else math.inf,
        iterations=iters,
        converged=conv,
        start_index=idx,
    )
