"""Scene-level Monte Carlo studies: positioning error versus noise, plug-in
confidence-region coverage, best-achievable-RMSE heatmaps, and synthetic
trajectories.

Trial i draws its random stream from seed XOR i, so trials are independent,
reproducible, and order-free.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .crb import best_rmse, confidence_ellipse, fim
from .errors import (
    CrbGateError,
    DegenerateDistance,
    DegenerateWaypoints,
    DomainError,
    InsufficientAnchors,
    SingularFim,
    ValidationError,
)
from .estimator import EstimatorConfig, solve
from .scene import Scene
from .wireless import (
    GaussianNoise,
    TargetState,
    jacobian,
    noise_information,
    sample_measurements,
)

# Confidence level used for the coverage column of sweep reports.
_REPORT_ALPHA = 0.05


@dataclass(frozen=True)
class SigmaRow:
    """One noise level's aggregate results."""

    sigma_dbm: float
    rmse_m: float
    crb_rmse_m: float
    coverage: float
    trials: int
    failures: int


@dataclass(frozen=True)
class SimReport:
    rows: tuple
    seed: int

    def to_json(self) -> dict:
        def num(v):
            return None if math.isnan(v) else v

        return {
            "seed": self.seed,
            "rows": [
                {
                    "sigma_dbm": r.sigma_dbm,
                    "rmse_m": num(r.rmse_m),
                    "crb_rmse_m": num(r.crb_rmse_m),
                    "coverage": num(r.coverage),
                    "trials": r.trials,
                    "failures": r.failures,
                }
                for r in self.rows
            ],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("sigma_dbm,rmse_m,crb_rmse_m,coverage,trials,failures\n")
        for r in self.rows:
            buf.write(
                f"{r.sigma_dbm!r},{r.rmse_m!r},{r.crb_rmse_m!r},"
                f"{r.coverage!r},{r.trials},{r.failures}\n"
            )
        return buf.getvalue()


def _scene_config(scene: Scene, config: Optional[EstimatorConfig]) -> EstimatorConfig:
    if config is not None:
        return config
    return EstimatorConfig(grid_extent=scene.bounds)


def _check_targets(scene: Scene, targets) -> list:
    if len(scene.anchors) < 3:
        raise InsufficientAnchors(
            f"estimation studies need at least 3 anchors, scene has "
            f"{len(scene.anchors)}"
        )
    if len(targets) == 0:
        raise ValidationError("need at least one target")
    x0, y0, x1, y1 = scene.bounds
    out = []
    for t in targets:
        xy = np.asarray(t, dtype=float).reshape(2)
        if not (x0 <= xy[0] <= x1 and y0 <= xy[1] <= y1):
            raise ValidationError(f"target {xy.tolist()} outside scene bounds")
        out.append(xy)
    return out


def run_mse(
    scene: Scene,
    sigmas: Sequence[float],
    trials_per_sigma: int,
    targets: Sequence,
    seed: int = 0,
    config: Optional[EstimatorConfig] = None,
) -> SimReport:
    """Positioning RMSE versus noise level, next to the bound's prediction.

    Per noise level: simulate frames at the given targets, estimate, and
    accumulate squared errors against the generating position. The coverage
    column reports how often the 95% plug-in region captured the truth.
    Failed trials are excluded from the averages and counted.
    """
    if trials_per_sigma < 1:
        raise ValidationError("trials_per_sigma must be >= 1")
    targets = _check_targets(scene, targets)
    cfg = _scene_config(scene, config)
    rows = []
    for s_idx, sigma in enumerate(sigmas):
        noise = GaussianNoise(float(sigma))
        i_v = 1.0 / (float(sigma) ** 2)
        crb_vals = [
            best_rmse(fim(jacobian(scene.anchors, TargetState(t)), i_v))
            for t in targets
        ]
        sq_err = []
        covered = 0
        cov_n = 0
        failures = 0
        for k in range(trials_per_sigma):
            trial_index = s_idx * trials_per_sigma + k
            target = targets[k % len(targets)]
            try:
                frame = sample_measurements(
                    scene.anchors,
                    TargetState(target),
                    noise,
                    timestamp=float(k),
                    seed=seed ^ trial_index,
                )
                est = solve(scene.anchors, frame, noise, cfg)
            except CrbGateError:
                failures += 1
                continue
            sq_err.append(float(np.sum((est.xy - target) ** 2)))
            try:
                f_hat = fim(jacobian(scene.anchors, TargetState(est.xy)), i_v)
                ell = confidence_ellipse(est.xy, f_hat, _REPORT_ALPHA)
            except (SingularFim, DegenerateDistance):
                continue
            cov_n += 1
            covered += bool(ell.contains(target))
        rows.append(
            SigmaRow(
                sigma_dbm=float(sigma),
                rmse_m=float(np.sqrt(np.mean(sq_err))) if sq_err else math.nan,
                crb_rmse_m=float(np.mean(crb_vals)),
                coverage=covered / cov_n if cov_n else math.nan,
                trials=trials_per_sigma,
                failures=failures,
            )
        )
    return SimReport(rows=tuple(rows), seed=int(seed))


def run_coverage(
    scene: Scene,
    alpha: float,
    trials: int,
    targets: Sequence,
    seed: int = 0,
    config: Optional[EstimatorConfig] = None,
) -> float:
    """Empirical coverage of the (1 - alpha) plug-in region.

    Each trial estimates the position from a fresh frame, builds the region
    around the estimate with the information matrix evaluated there, and
    checks whether the true position fell inside.
    """
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    targets = _check_targets(scene, targets)
    cfg = _scene_config(scene, config)
    i_v = noise_information(scene.noise, mc_samples=200_000, seed=seed)
    covered = 0
    valid = 0
    for k in range(trials):
        target = targets[k % len(targets)]
        try:
            frame = sample_measurements(
                scene.anchors,
                TargetState(target),
                scene.noise,
                timestamp=float(k),
                seed=seed ^ k,
            )
            est = solve(scene.anchors, frame, scene.noise, cfg)
            f_hat = fim(jacobian(scene.anchors, TargetState(est.xy)), i_v)
            ell = confidence_ellipse(est.xy, f_hat, alpha)
        except CrbGateError:
            continue
        valid += 1
        covered += bool(ell.contains(target))
    if valid == 0:
        raise ValidationError("every coverage trial failed")
    return covered / valid


@dataclass(frozen=True, eq=False)
class HeatmapGrid:
    """Best-achievable RMSE over cell centers; NaN marks unlocalizable cells."""

    xs: np.ndarray  # (nx,) cell-center x coordinates
    ys: np.ndarray  # (ny,) cell-center y coordinates
    rmse: np.ndarray  # (ny, nx), NaN where the information matrix is singular

    def to_json(self) -> dict:
        return {
            "xs": [float(x) for x in self.xs],
            "ys": [float(y) for y in self.ys],
            "rmse": [
                [None if math.isnan(v) else float(v) for v in row]
                for row in self.rmse
            ],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("x_m,y_m,best_rmse_m\n")
        for j, y in enumerate(self.ys):
            for i, x in enumerate(self.xs):
                v = self.rmse[j, i]
                cell = "" if math.isnan(v) else repr(float(v))
                buf.write(f"{float(x)!r},{float(y)!r},{cell}\n")
        return buf.getvalue()


def crb_heatmap(scene: Scene, grid: tuple) -> HeatmapGrid:
    """Best-achievable RMSE at every cell center of a bounds-covering grid.

    Cells with singular information (collinear anchors, a cell sitting on an
    anchor) carry NaN instead of failing the whole map.
    """
    nx, ny = int(grid[0]), int(grid[1])
    if nx < 2 or ny < 2:
        raise DomainError("heatmap grid must be at least 2x2")
    x0, y0, x1, y1 = scene.bounds
    xs = x0 + (np.arange(nx) + 0.5) * (x1 - x0) / nx
    ys = y0 + (np.arange(ny) + 0.5) * (y1 - y0) / ny
    values = np.full((ny, nx), math.nan)
    if len(scene.anchors) == 0:
        return HeatmapGrid(xs=xs, ys=ys, rmse=values)
    i_v = noise_information(scene.noise, mc_samples=200_000, seed=0)
    for j, y in enumerate(ys):
        for i, x in enumerate(xs):
            try:
                f = fim(jacobian(scene.anchors, TargetState((x, y))), i_v)
                values[j, i] = best_rmse(f)
            except (SingularFim, DegenerateDistance):
                pass
    return HeatmapGrid(xs=xs, ys=ys, rmse=values)


@dataclass(frozen=True, eq=False)
class ProbeResult:
    """Planner probe: the best-case region at a clicked floor position.

    Unlike gating, the information matrix is evaluated at the probed point
    itself (it answers "what is achievable here", the heatmap's perspective).
    ``unlocalizable`` marks singular geometry; the UI renders it as a
    sentinel instead of an error.
    """

    point: np.ndarray
    alpha: float
    sigma: Optional[float]
    unlocalizable: bool
    best_rmse_m: Optional[float]
    ellipse: object = None  # ConfidenceEllipse | None
    boundary: Optional[np.ndarray] = None  # (n, 2) world coords
    cameras: tuple = ()

    def to_json(self) -> dict:
        from .crb import ellipse_to_json

        return {
            "point": [float(v) for v in self.point],
            "alpha": self.alpha,
            "sigma": self.sigma,
            "unlocalizable": self.unlocalizable,
            "best_rmse_m": self.best_rmse_m,
            "ellipse": None if self.ellipse is None else ellipse_to_json(self.ellipse),
            "boundary": None
            if self.boundary is None
            else [[float(x), float(y)] for x, y in self.boundary],
            "cameras": list(self.cameras),
        }


def probe_point(
    scene: Scene, point, alpha: float = 0.05, n_points: int = 64
) -> ProbeResult:
    """Best-achievable region at a floor position, plus per-camera previews.

    Cameras that cannot see the region are listed with a ``skipped`` reason
    rather than dropped, so a planner can explain the empty panel.
    """
    from .camera import project_region
    from .errors import BehindCamera, RegionOutsideImage

    xy = np.asarray(point, dtype=float).reshape(2)
    sigma = scene.noise.sigma if isinstance(scene.noise, GaussianNoise) else None
    i_v = noise_information(scene.noise, mc_samples=200_000, seed=0)
    try:
        f = fim(jacobian(scene.anchors, TargetState(xy)), i_v)
        ellipse = confidence_ellipse(xy, f, alpha)
        rmse = best_rmse(f)
    except (SingularFim, DegenerateDistance, ValidationError):
        return ProbeResult(
            point=xy,
            alpha=float(alpha),
            sigma=sigma,
            unlocalizable=True,
            best_rmse_m=None,
        )
    cameras = []
    for camera in scene.cameras:
        try:
            polygon, box = project_region(
                camera, ellipse, z_levels=(0.0, scene.person_height),
                n_points=n_points,
            )
            cameras.append(
                {
                    "camera_id": camera.id,
                    "image_size": list(camera.image_size),
                    "polygon": [[float(u), float(v)] for u, v in polygon],
                    "box": [box.x_min, box.y_min, box.x_max, box.y_max],
                }
            )
        except (BehindCamera, RegionOutsideImage) as exc:
            cameras.append(
                {"camera_id": camera.id, "skipped": type(exc).__name__}
            )
    return ProbeResult(
        point=xy,
        alpha=float(alpha),
        sigma=sigma,
        unlocalizable=False,
        best_rmse_m=rmse,
        ellipse=ellipse,
        boundary=ellipse.boundary(n_points),
        cameras=tuple(cameras),
    )


def gen_trajectory(
    waypoints: Sequence, speed: float, rate: float
) -> list:
    """Constant-speed piecewise-linear path sampled on the 1/rate grid.

    Returns (t, position) pairs; samples stay on the uniform time grid, so a
    2x-rate resampling contains the 1x samples at even indices.
    """
    if speed <= 0 or rate <= 0:
        raise DomainError("speed and rate must be > 0")
    pts = [np.asarray(w, dtype=float).reshape(2) for w in waypoints]
    if len(pts) < 2:
        raise ValidationError("need at least two waypoints")
    pts = np.stack(pts)
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    keep = seg > 0
    if not keep.any():
        raise DegenerateWaypoints("waypoints describe a zero-length path")
    # Drop zero-length segments so arc-length interpolation stays monotone.
    verts = np.vstack([pts[0], pts[1:][keep]])
    cum = np.concatenate([[0.0], np.cumsum(seg[keep])])
    total = float(cum[-1])
    duration = total / speed
    n = int(math.floor(duration * rate + 1e-9)) + 1
    times = np.arange(n) / rate
    arc = np.minimum(times * speed, total)
    x = np.interp(arc, cum, verts[:, 0])
    y = np.interp(arc, cum, verts[:, 1])
    return [(float(t), np.array([xi, yi])) for t, xi, yi in zip(times, x, y)]


def report_to_json_str(report: SimReport) -> str:
    return json.dumps(report.to_json(), indent=2) + "\n"
