"""Report figures rendered next to the CLI's delimited outputs."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

# The break-even accuracy where wireless gating stops helping a tracker.
BREAK_EVEN_M = 1.5


def save_heatmap_figure(grid, scene, path, sigma=None) -> None:
    """Best-RMSE floor map with anchors and the 1.5 m break-even contour."""
    fig, ax = plt.subplots(figsize=(7.0, 6.0))
    x0, y0, x1, y1 = scene.bounds
    im = ax.imshow(
        grid.rmse,
        origin="lower",
        extent=(x0, x1, y0, y1),
        cmap="viridis",
        vmin=0.0,
    )
    finite = grid.rmse[np.isfinite(grid.rmse)]
    if finite.size and finite.min() < BREAK_EVEN_M < finite.max():
        ax.contour(
            grid.xs,
            grid.ys,
            grid.rmse,
            levels=[BREAK_EVEN_M],
            colors="red",
            linestyles="dashed",
            linewidths=1.2,
        )
    if scene.anchors:
        pos = np.array([a.position for a in scene.anchors])
        ax.plot(pos[:, 0], pos[:, 1], "w^", markersize=6, markeredgecolor="k")
    fig.colorbar(im, ax=ax, label="best achievable RMSE (m)")
    title = "Best achievable positioning RMSE"
    if sigma is not None:
        title += f" (sigma = {sigma:g} dBm)"
    ax.set_title(title)
    ax.set_xlabel("x (m)")
    ax.set_ylabel("y (m)")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_mse_figure(report, path) -> None:
    """Empirical RMSE against the bound, per noise level."""
    sig = [r.sigma_dbm for r in report.rows]
    rmse = [r.rmse_m for r in report.rows]
    bound = [r.crb_rmse_m for r in report.rows]
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    ax.plot(sig, rmse, "o-", label="least-squares estimator")
    ax.plot(sig, bound, "s--", label="bound (best achievable)")
    ax.set_xlabel("RSS noise std (dBm)")
    ax.set_ylabel("positioning RMSE (m)")
    ax.set_title("Positioning error versus measurement noise")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def save_success_figure(curve, auc_value, recall, path) -> None:
    """Overlap success plot in the usual benchmark style."""
    t = [p[0] for p in curve]
    v = [p[1] for p in curve]
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    label = f"predictions [{auc_value:.3f}]"
    if recall is not None and not (isinstance(recall, float) and math.isnan(recall)):
        label += f" (recall {recall:.1f}%)"
    ax.plot(t, v, "-", linewidth=2, label=label)
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1.02)
    ax.set_xlabel("overlap threshold")
    ax.set_ylabel("success rate")
    ax.set_title("Success plot")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="lower left")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
