"""RSS measurement models, noise models and their derivatives.

Distances are computed in full 3D (anchors may be mounted at height, the
target's z is held fixed); gradients are taken with respect to (x, y) only
because the estimated position lives on a horizontal plane.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from .errors import (
    DegenerateDistance,
    NonFiniteDensity,
    ValidationError,
)

# Singularity guard for the 1/d^2 pole of the gradient: reject, never clamp.
D_MIN = 0.01  # meters

# d(10*log10(d))/dd = _LOG10_GAIN / d
_LOG10_GAIN = 10.0 / math.log(10.0)

# Centered finite-difference step for numeric scores of user densities.
_SCORE_STEP = 1e-6


@dataclass(frozen=True)
class Anchor:
    """A fixed wireless sensor with known position and path-loss calibration.

    ``path_loss_a`` is the RSS at 1 m (dBm); ``path_loss_b`` is the
    dimensionless slope of the log-distance model (negative values model
    attenuation). ``path_loss_b`` must be nonzero, otherwise the anchor's
    measurement carries no position information.
    """

    id: str
    position: np.ndarray
    path_loss_a: float
    path_loss_b: float

    def __post_init__(self):
        pos = np.asarray(self.position, dtype=float).reshape(3)
        object.__setattr__(self, "position", pos)
        if not np.all(np.isfinite(pos)):
            raise ValidationError(f"anchor {self.id!r}: position must be finite")
        if not math.isfinite(self.path_loss_a):
            raise ValidationError(f"anchor {self.id!r}: path_loss_a must be finite")
        if not math.isfinite(self.path_loss_b) or self.path_loss_b == 0.0:
            raise ValidationError(
                f"anchor {self.id!r}: path_loss_b must be finite and nonzero"
            )


@dataclass(frozen=True)
class TargetState:
    """Horizontal position of the transmitter; its height is held constant."""

    xy: np.ndarray
    z_fixed: float = 0.0

    def __post_init__(self):
        xy = np.asarray(self.xy, dtype=float).reshape(2)
        object.__setattr__(self, "xy", xy)
        if not np.all(np.isfinite(xy)) or not math.isfinite(self.z_fixed):
            raise ValidationError("target coordinates must be finite")

    @property
    def xyz(self) -> np.ndarray:
        return np.array([self.xy[0], self.xy[1], self.z_fixed])


@dataclass(frozen=True)
class GaussianNoise:
    """Zero-mean Gaussian measurement noise with standard deviation in dBm."""

    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ValidationError("Gaussian sigma must be finite and > 0")


@dataclass(frozen=True)
class EmpiricalNoise:
    """User-supplied noise density.

    ``log_density`` evaluates log p(v) and should accept numpy arrays
    (scalar-only callables are tolerated but slower). ``sampler`` draws n
    i.i.d. values given a seeded ``numpy.random.Generator``, which makes every
    draw deterministic given the seed. ``score`` may supply the analytic
    derivative of log p; otherwise a centered finite difference is used.
    """

    log_density: Callable
    sampler: Callable[[np.random.Generator, int], np.ndarray]
    score: Optional[Callable] = None


NoiseModel = Union[GaussianNoise, EmpiricalNoise]


@dataclass(frozen=True)
class MeasurementFrame:
    """One time instant's RSS readings, one per heard anchor."""

    timestamp: float
    readings: tuple = field(default_factory=tuple)

    def __post_init__(self):
        norm = tuple((str(a), float(r)) for a, r in self.readings)
        object.__setattr__(self, "readings", norm)
        ids = [a for a, _ in norm]
        if len(set(ids)) != len(ids):
            raise ValidationError("anchor ids must be unique within a frame")
        if any(not math.isfinite(r) for _, r in norm):
            raise ValidationError("RSS readings must be finite")

    @property
    def anchor_ids(self) -> tuple:
        return tuple(a for a, _ in self.readings)

    @property
    def rss(self) -> np.ndarray:
        return np.array([r for _, r in self.readings])


def anchor_arrays(anchors: Sequence[Anchor]):
    """Stack anchor fields into (ids, positions (N,3), a (N,), b (N,))."""
    if len(anchors) == 0:
        raise ValidationError("need at least one anchor")
    ids = [a.id for a in anchors]
    pos = np.stack([a.position for a in anchors])
    pl_a = np.array([a.path_loss_a for a in anchors])
    pl_b = np.array([a.path_loss_b for a in anchors])
    return ids, pos, pl_a, pl_b


def _distances(positions: np.ndarray, ids, target: TargetState):
    diff = target.xyz[None, :] - positions  # (N, 3)
    d = np.sqrt(np.einsum("ij,ij->i", diff, diff))
    bad = np.flatnonzero(d < D_MIN)
    if bad.size:
        i = int(bad[0])
        raise DegenerateDistance(ids[i], float(d[i]))
    return diff, d


def predict_rss(anchor: Anchor, target: TargetState) -> float:
    """Noise-free RSS in dBm of the log-distance path-loss model."""
    d = float(np.linalg.norm(target.xyz - anchor.position))
    if d < D_MIN:
        raise DegenerateDistance(anchor.id, d)
    return anchor.path_loss_a + 10.0 * anchor.path_loss_b * math.log10(d)


def predict_all(anchors: Sequence[Anchor], target: TargetState) -> np.ndarray:
    """Noise-free RSS vector across anchors, ordered like the anchor list."""
    ids, pos, a, b = anchor_arrays(anchors)
    _, d = _distances(pos, ids, target)
    return a + 10.0 * b * np.log10(d)


def jacobian(anchors: Sequence[Anchor], target: TargetState) -> np.ndarray:
    """Gradient of the predicted RSS vector w.r.t. (x, y), shape (2, N).

    Column i is (10/ln 10) * b_i * (p - p_i)_xy / d_i^2 where d_i is the full
    3D distance; the vertical component is discarded because the target's z
    is fixed.
    """
    ids, pos, _, b = anchor_arrays(anchors)
    diff, d = _distances(pos, ids, target)
    return _LOG10_GAIN * b * diff[:, :2].T / (d * d)


def _vector_eval(fn: Callable, v: np.ndarray) -> np.ndarray:
    """Evaluate fn over v, tolerating scalar-only callables."""
    try:
        out = np.asarray(fn(v), dtype=float)
        if out.shape == v.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([float(fn(x)) for x in v])


def noise_information(
    noise: NoiseModel, mc_samples: int = 1_000_000, seed: int = 0
) -> float:
    """Expected squared score of the noise density (the information scalar).

    Gaussian noise has the closed form 1/sigma^2. For empirical densities the
    expectation is taken by Monte Carlo over ``mc_samples`` draws; the score
    is the analytic derivative when supplied, else a centered finite
    difference of ``log_density`` with step 1e-6.
    """
    if isinstance(noise, GaussianNoise):
        return 1.0 / (noise.sigma * noise.sigma)
    if mc_samples < 1:
        raise ValidationError("mc_samples must be >= 1 for empirical noise")
    rng = np.random.default_rng(seed)
    v = np.asarray(noise.sampler(rng, mc_samples), dtype=float).reshape(-1)
    if noise.score is not None:
        s = _vector_eval(noise.score, v)
    else:
        hi = _vector_eval(noise.log_density, v + _SCORE_STEP)
        lo = _vector_eval(noise.log_density, v - _SCORE_STEP)
        if not (np.all(np.isfinite(hi)) and np.all(np.isfinite(lo))):
            raise NonFiniteDensity(
                "log_density is non-finite at sampled points"
            )
        s = (hi - lo) / (2.0 * _SCORE_STEP)
    if not np.all(np.isfinite(s)):
        raise NonFiniteDensity("score is non-finite at sampled points")
    return float(np.mean(s * s))


def draw_noise(noise: NoiseModel, rng: np.random.Generator, n: int) -> np.ndarray:
    """n i.i.d. noise draws from the model."""
    if isinstance(noise, GaussianNoise):
        return rng.normal(0.0, noise.sigma, n)
    return np.asarray(noise.sampler(rng, n), dtype=float).reshape(n)


def sample_measurements(
    anchors: Sequence[Anchor],
    target: TargetState,
    noise: NoiseModel,
    timestamp: float = 0.0,
    seed: int = 0,
) -> MeasurementFrame:
    """One simulated frame: predicted RSS plus i.i.d. noise, seeded."""
    clean = predict_all(anchors, target)
    rng = np.random.default_rng(seed)
    noisy = clean + draw_noise(noise, rng, len(anchors))
    readings = tuple((a.id, float(r)) for a, r in zip(anchors, noisy))
    return MeasurementFrame(timestamp=float(timestamp), readings=readings)


# --- measurement JSONL interface --------------------------------------------
# One frame per line: {"t": <seconds>, "rss": {"<anchor_id>": <dBm>, ...}}


def frame_to_json(frame: MeasurementFrame) -> dict:
    return {"t": frame.timestamp, "rss": {a: r for a, r in frame.readings}}


def frame_from_json(obj: dict) -> MeasurementFrame:
    if not isinstance(obj, dict) or "t" not in obj or "rss" not in obj:
        raise ValidationError('measurement record needs "t" and "rss" fields')
    rss = obj["rss"]
    if not isinstance(rss, dict):
        raise ValidationError('"rss" must map anchor ids to dBm values')
    try:
        readings = tuple((str(k), float(v)) for k, v in rss.items())
        return MeasurementFrame(timestamp=float(obj["t"]), readings=readings)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad measurement record: {exc}") from exc


def read_measurements(lines: Iterable[str]) -> list:
    """Parse measurement JSONL lines into frames (blank lines skipped)."""
    frames = []
    for i, line in enumerate(lines):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"line {i + 1}: invalid JSON: {exc}") from exc
        frames.append(frame_from_json(obj))
    return frames


def load_measurements(path) -> list:
    with open(path, "r", encoding="utf-8") as fh:
        return read_measurements(fh)


def dump_measurements(frames: Sequence[MeasurementFrame], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for frame in frames:
            fh.write(json.dumps(frame_to_json(frame)) + "\n")
