// Screen/world transforms and small display geometry helpers. This is layout
// math only; all positioning statistics come from the service.

import type { Viewport } from "./state.js";

export function worldToScreen(
  vp: Viewport,
  x: number,
  y: number,
): [number, number] {
  // y grows upward in world coordinates, downward on canvas
  return [(x - vp.originX) * vp.zoom, -(y - vp.originY) * vp.zoom];
}

export function screenToWorld(
  vp: Viewport,
  px: number,
  py: number,
): [number, number] {
  return [vp.originX + px / vp.zoom, vp.originY - py / vp.zoom];
}

/** Round-trip helper used to assert the transform stays invertible. */
export function roundTripError(vp: Viewport, x: number, y: number): number {
  const [px, py] = worldToScreen(vp, x, y);
  const [bx, by] = screenToWorld(vp, px, py);
  return Math.max(Math.abs(bx - x), Math.abs(by - y));
}

export function pointInPolygon(
  poly: [number, number][],
  x: number,
  y: number,
): boolean {
  let inside = false;
  for (let i = 0, j = poly.length - 1; i < poly.length; j = i++) {
    const [xi, yi] = poly[i];
    const [xj, yj] = poly[j];
    const crosses =
      yi > y !== yj > y && x < ((xj - xi) * (y - yi)) / (yj - yi) + xi;
    if (crosses) inside = !inside;
  }
  return inside;
}

export function nearestIndex(
  points: [number, number][],
  x: number,
  y: number,
): { index: number; distance: number } {
  let best = -1;
  let bestD = Infinity;
  points.forEach(([px, py], i) => {
    const d = Math.hypot(px - x, py - y);
    if (d < bestD) {
      bestD = d;
      best = i;
    }
  });
  return { index: best, distance: bestD };
}
