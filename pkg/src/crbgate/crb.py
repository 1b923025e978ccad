"""Fisher information, the Cramér-Rao covariance bound, and the elliptical
confidence region built from them.

The region is strictly 2D (the target height is fixed), so the chi-squared
quantile has 2 degrees of freedom and a closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularFim, ValidationError

# Scale-free invertibility cutoff: min eigenvalue must exceed this fraction
# of the trace.
_PD_RTOL = 1e-10

# Slack for membership tests at the boundary (relative to the threshold).
_CONTAINS_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class Fim2:
    """2x2 Fisher information matrix; symmetric positive semidefinite."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (2, 2):
            raise ValidationError("information matrix must be 2x2")
        scale = max(1.0, float(np.abs(m).max()))
        if abs(m[0, 1] - m[1, 0]) > 1e-9 * scale:
            raise ValidationError("information matrix must be symmetric")
        m = 0.5 * (m + m.T)
        tr = float(np.trace(m))
        if np.linalg.eigvalsh(m).min() < -1e-12 * max(tr, 1.0):
            raise ValidationError("information matrix must be PSD")
        object.__setattr__(self, "matrix", m)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)


def fim(jac: np.ndarray, i_v: float) -> Fim2:
    """Information matrix i_v * J J^T from the (2, N) measurement Jacobian."""
    j = np.asarray(jac, dtype=float)
    if j.ndim != 2 or j.shape[0] != 2 or j.shape[1] < 1:
        raise ValidationError("jacobian must have shape (2, N) with N >= 1")
    if not (math.isfinite(i_v) and i_v > 0):
        raise DomainError("noise information must be finite and > 0")
    m = i_v * (j @ j.T)
    return Fim2(0.5 * (m + m.T))


def _require_pd(f: Fim2) -> np.ndarray:
    w = f.eigenvalues()
    if w.min() <= _PD_RTOL * max(float(np.trace(f.matrix)), 0.0) or w.min() <= 0:
        raise SingularFim(w)
    return w


def crb(f: Fim2) -> np.ndarray:
    """Inverse information matrix: the covariance lower bound, 2x2 SPD."""
    _require_pd(f)
    inv = np.linalg.inv(f.matrix)
    return 0.5 * (inv + inv.T)


def best_rmse(f: Fim2) -> float:
    """Best achievable RMSE in meters: sqrt of the bound's total variance."""
    return float(math.sqrt(np.trace(crb(f))))


def chi2_quantile(alpha: float) -> float:
    """Upper-alpha quantile of the chi-squared law with 2 dof: -2 ln(alpha)."""
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"alpha must be in (0, 1), got {alpha}")
    return -2.0 * math.log(alpha)


@dataclass(frozen=True, eq=False)
class ConfidenceEllipse:
    """(1 - alpha) elliptical confidence region around a plug-in estimate.

    The region is the set of points whose information-weighted squared
    distance from the center stays at or below the 2-dof chi-squared
    threshold. The information matrix itself is stored (not its inverse) so
    the defining quadratic form stays primary.
    """

    center: np.ndarray
    fim: Fim2
    level_alpha: float
    threshold: float

    def __post_init__(self):
        c = np.asarray(self.center, dtype=float).reshape(2)
        object.__setattr__(self, "center", c)

    def quadratic_form(self, point) -> float:
        d = np.asarray(point, dtype=float).reshape(2) - self.center
        return float(d @ self.fim.matrix @ d)

    def contains(self, point) -> bool:
        return self.quadratic_form(point) <= self.threshold * (1.0 + _CONTAINS_RTOL)

    @property
    def area(self) -> float:
        return math.pi * self.threshold / math.sqrt(np.linalg.det(self.fim.matrix))

    def boundary(self, n_points: int = 64) -> np.ndarray:
        """Counterclockwise boundary points, shape (n_points, 2).

        Axes come from the eigendecomposition of the information matrix:
        semi-axis k has length sqrt(threshold / eigenvalue_k).
        """
        if n_points < 3:
            raise DomainError("boundary needs at least 3 points")
        lam, vec = np.linalg.eigh(self.fim.matrix)
        if lam.min() <= 0:
            raise SingularFim(lam)
        if np.linalg.det(vec) < 0:
            vec = vec.copy()
            vec[:, 0] = -vec[:, 0]
        axes = np.sqrt(self.threshold / lam)
        t = np.linspace(0.0, 2.0 * math.pi, n_points, endpoint=False)
        local = np.stack([axes[0] * np.cos(t), axes[1] * np.sin(t)])
        return self.center[None, :] + (vec @ local).T


def confidence_ellipse(center, f: Fim2, alpha: float) -> ConfidenceEllipse:
    """Build the (1 - alpha) region centered at the position estimate."""
    _require_pd(f)
    return ConfidenceEllipse(
        center=np.asarray(center, dtype=float).reshape(2),
        fim=f,
        level_alpha=float(alpha),
        threshold=chi2_quantile(alpha),
    )


def ellipse_to_json(e: ConfidenceEllipse) -> dict:
    return {
        "center": [float(e.center[0]), float(e.center[1])],
        "fim": [[float(v) for v in row] for row in e.fim.matrix],
        "alpha": e.level_alpha,
        "threshold": e.threshold,
    }


def ellipse_from_json(obj: dict) -> ConfidenceEllipse:
    try:
        return ConfidenceEllipse(
            center=np.asarray(obj["center"], dtype=float),
            fim=Fim2(np.asarray(obj["fim"], dtype=float)),
            level_alpha=float(obj["alpha"]),
            threshold=float(obj["threshold"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad ellipse record: {exc}") from exc
