// Fixed-endpoint color scale for the heatmap layer and numeric formatting.
// Endpoints are pinned (0 to 3 m) so successive edits stay comparable.

import { COLOR_SCALE_RANGE } from "./state.js";

// compact viridis-like ramp, dark blue -> teal -> yellow
const STOPS: [number, [number, number, number]][] = [
  [0.0, [68, 1, 84]],
  [0.25, [59, 82, 139]],
  [0.5, [33, 145, 140]],
  [0.75, [94, 201, 98]],
  [1.0, [253, 231, 37]],
];

export function colorFor(valueM: number | null): string {
  if (valueM === null || Number.isNaN(valueM)) {
    return "#777777"; // unlocalizable sentinel
  }
  const [lo, hi] = COLOR_SCALE_RANGE;
  const t = Math.min(1, Math.max(0, (valueM - lo) / (hi - lo)));
  for (let i = 1; i < STOPS.length; i++) {
    const [t1, c1] = STOPS[i];
    const [t0, c0] = STOPS[i - 1];
    if (t <= t1) {
      const f = (t - t0) / (t1 - t0);
      const mix = c0.map((v, k) => Math.round(v + f * (c1[k] - v)));
      return `rgb(${mix[0]},${mix[1]},${mix[2]})`;
    }
  }
  const last = STOPS[STOPS.length - 1][1];
  return `rgb(${last[0]},${last[1]},${last[2]})`;
}

/** Probe readout: meters from the service, centimeters on screen. */
export function formatCm(valueM: number | null): string {
  if (valueM === null) return "unlocalizable";
  return `${(valueM * 100).toFixed(1)} cm`;
}
