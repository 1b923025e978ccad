// Canvas drawing for the floorplan and the camera preview panel. Pure
// presentation: geometry comes from the state and service payloads.

import { colorFor } from "./color.js";
import { worldToScreen } from "./geometry.js";
import { breakEvenContour } from "./heatmap.js";
import type { PlannerViewState } from "./state.js";
import type { ProbeCameraJson, SceneJson } from "./types.js";

export function drawFloorplan(
  ctx: CanvasRenderingContext2D,
  width: number,
  height: number,
  state: PlannerViewState,
  scene: SceneJson | null,
): void {
  const vp = state.viewport;
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#13151a";
  ctx.fillRect(0, 0, width, height);
  if (!scene) return;

  if (state.heatmap) {
    const { xs, ys, rmse } = state.heatmap;
    const cw = xs.length > 1 ? (xs[1] - xs[0]) * vp.zoom : 8;
    const ch = ys.length > 1 ? (ys[1] - ys[0]) * vp.zoom : 8;
    ys.forEach((y, j) => {
      xs.forEach((x, i) => {
        const [px, py] = worldToScreen(vp, x, y);
        ctx.fillStyle = colorFor(rmse[j][i]);
        ctx.globalAlpha = rmse[j][i] === null ? 0.45 : 0.8;
        ctx.fillRect(px - cw / 2, py - ch / 2, cw + 0.5, ch + 0.5);
      });
    });
    ctx.globalAlpha = 1.0;
    ctx.strokeStyle = "#ff5050";
    ctx.setLineDash([6, 4]);
    ctx.lineWidth = 1.5;
    for (const [[x0, y0], [x1, y1]] of breakEvenContour(state.heatmap)) {
      const [sx0, sy0] = worldToScreen(vp, x0, y0);
      const [sx1, sy1] = worldToScreen(vp, x1, y1);
      ctx.beginPath();
      ctx.moveTo(sx0, sy0);
      ctx.lineTo(sx1, sy1);
      ctx.stroke();
    }
    ctx.setLineDash([]);
  }

  // area of interest
  const [bx0, by0, bx1, by1] = scene.bounds;
  const [p0x, p0y] = worldToScreen(vp, bx0, by0);
  const [p1x, p1y] = worldToScreen(vp, bx1, by1);
  ctx.strokeStyle = "#8899aa";
  ctx.lineWidth = 1;
  ctx.strokeRect(
    Math.min(p0x, p1x),
    Math.min(p0y, p1y),
    Math.abs(p1x - p0x),
    Math.abs(p1y - p0y),
  );

  // anchors
  for (const anchor of scene.anchors) {
    const [px, py] = worldToScreen(vp, anchor.position[0], anchor.position[1]);
    ctx.fillStyle = "#ffd34d";
    ctx.strokeStyle = "#352a00";
    ctx.beginPath();
    ctx.moveTo(px, py - 6);
    ctx.lineTo(px - 5, py + 4);
    ctx.lineTo(px + 5, py + 4);
    ctx.closePath();
    ctx.fill();
    ctx.stroke();
  }

  // trajectory waypoints
  if (state.waypoints.length > 1) {
    ctx.strokeStyle = "#ff8844";
    ctx.lineWidth = 2;
    ctx.beginPath();
    state.waypoints.forEach(([x, y], i) => {
      const [px, py] = worldToScreen(vp, x, y);
      if (i === 0) ctx.moveTo(px, py);
      else ctx.lineTo(px, py);
    });
    ctx.stroke();
  }

  // probe overlays: one ring per alpha level, all around the same point
  if (state.probe) {
    for (const overlay of state.probe.overlays) {
      if (!overlay.boundary) continue;
      ctx.strokeStyle = "#5ad1ff";
      ctx.lineWidth = 2;
      ctx.beginPath();
      overlay.boundary.forEach(([x, y], i) => {
        const [px, py] = worldToScreen(vp, x, y);
        if (i === 0) ctx.moveTo(px, py);
        else ctx.lineTo(px, py);
      });
      ctx.closePath();
      ctx.stroke();
    }
    const probe = state.probe.result;
    const [cx, cy] = worldToScreen(vp, probe.point[0], probe.point[1]);
    if (probe.unlocalizable) {
      // hatched sentinel marker
      ctx.strokeStyle = "#ff5050";
      ctx.lineWidth = 1.5;
      for (let d = -8; d <= 8; d += 4) {
        ctx.beginPath();
        ctx.moveTo(cx + d - 4, cy - 8);
        ctx.lineTo(cx + d + 4, cy + 8);
        ctx.stroke();
      }
    } else {
      ctx.fillStyle = "#5ad1ff";
      ctx.beginPath();
      ctx.arc(cx, cy, 3, 0, 2 * Math.PI);
      ctx.fill();
    }
  }
}

export function drawCameraPanel(
  ctx: CanvasRenderingContext2D,
  width: number,
  height: number,
  preview: ProbeCameraJson | null,
): void {
  ctx.clearRect(0, 0, width, height);
  ctx.fillStyle = "#0c0e12";
  ctx.fillRect(0, 0, width, height);
  if (!preview) {
    note(ctx, width, height, "no camera selected");
    return;
  }
  if (preview.skipped || !preview.polygon || !preview.box) {
    note(ctx, width, height, `behind camera / out of view (${preview.skipped ?? "no region"})`);
    return;
  }
  const [iw, ih] = preview.image_size ?? [1280, 960];
  const scale = Math.min(width / iw, height / ih);
  const toPanel = (u: number, v: number): [number, number] => [
    u * scale,
    v * scale,
  ];

  // synthetic image frame
  ctx.strokeStyle = "#667788";
  ctx.strokeRect(0, 0, iw * scale, ih * scale);

  // projected region polygon
  ctx.strokeStyle = "#5ad1ff";
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  preview.polygon.forEach(([u, v], i) => {
    const [px, py] = toPanel(u, v);
    if (i === 0) ctx.moveTo(px, py);
    else ctx.lineTo(px, py);
  });
  ctx.closePath();
  ctx.stroke();

  // search box
  const [x0, y0, x1, y1] = preview.box;
  const [bx, by] = toPanel(x0, y0);
  ctx.strokeStyle = "#7CFF6B";
  ctx.strokeRect(bx, by, (x1 - x0) * scale, (y1 - y0) * scale);
}

function note(
  ctx: CanvasRenderingContext2D,
  width: number,
  height: number,
  text: string,
): void {
  ctx.fillStyle = "#99a6b5";
  ctx.font = "13px system-ui, sans-serif";
  ctx.textAlign = "center";
  ctx.fillText(text, width / 2, height / 2);
}
