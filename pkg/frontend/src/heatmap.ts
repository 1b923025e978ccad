// Heatmap layer model: holds the service payload untouched and derives
// display geometry (cell rectangles, the 1.5 m break-even contour) from it.

import { BREAK_EVEN_M } from "./state.js";
import type { HeatmapJson } from "./types.js";

export interface Cell {
  x: number; // world meters, cell center
  y: number;
  value: number | null;
}

export function cells(grid: HeatmapJson): Cell[] {
  const out: Cell[] = [];
  grid.ys.forEach((y, j) => {
    grid.xs.forEach((x, i) => {
      out.push({ x, y, value: grid.rmse[j][i] });
    });
  });
  return out;
}

export function cellAt(grid: HeatmapJson, x: number, y: number): Cell | null {
  if (grid.xs.length === 0 || grid.ys.length === 0) return null;
  const i = nearest(grid.xs, x);
  const j = nearest(grid.ys, y);
  return { x: grid.xs[i], y: grid.ys[j], value: grid.rmse[j][i] };
}

function nearest(sorted: number[], v: number): number {
  let best = 0;
  let bestD = Infinity;
  sorted.forEach((s, i) => {
    const d = Math.abs(s - v);
    if (d < bestD) {
      bestD = d;
      best = i;
    }
  });
  return best;
}

export type Segment = [[number, number], [number, number]];

/**
 * Iso-line segments of the break-even level via marching squares over cell
 * centers. Cells without a value (unlocalizable) never contribute segments.
 */
export function breakEvenContour(
  grid: HeatmapJson,
  level: number = BREAK_EVEN_M,
): Segment[] {
  const segs: Segment[] = [];
  const { xs, ys, rmse } = grid;
  for (let j = 0; j + 1 < ys.length; j++) {
    for (let i = 0; i + 1 < xs.length; i++) {
      const corners = [
        [xs[i], ys[j], rmse[j][i]],
        [xs[i + 1], ys[j], rmse[j][i + 1]],
        [xs[i + 1], ys[j + 1], rmse[j + 1][i + 1]],
        [xs[i], ys[j + 1], rmse[j + 1][i]],
      ] as [number, number, number | null][];
      if (corners.some(([, , v]) => v === null)) continue;
      const crossings: [number, number][] = [];
      for (let e = 0; e < 4; e++) {
        const [x0, y0, v0] = corners[e] as [number, number, number];
        const [x1, y1, v1] = corners[(e + 1) % 4] as [number, number, number];
        const below0 = v0 < level;
        const below1 = v1 < level;
        if (below0 !== below1) {
          const f = (level - v0) / (v1 - v0);
          crossings.push([x0 + f * (x1 - x0), y0 + f * (y1 - y0)]);
        }
      }
      for (let k = 0; k + 1 < crossings.length; k += 2) {
        segs.push([crossings[k], crossings[k + 1]]);
      }
    }
  }
  return segs;
}
