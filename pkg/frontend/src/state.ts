// Planner view state and its pure update helpers. Slider values are clamped
// to their configured ranges; the viewport transform is kept invertible by
// bounding the zoom away from zero.

import type { HeatmapJson, ProbeJson } from "./types.js";

export type Tool =
  | "add-anchor"
  | "move-anchor"
  | "delete-anchor"
  | "probe"
  | "trajectory";

export const TOOLS: Tool[] = [
  "add-anchor",
  "move-anchor",
  "delete-anchor",
  "probe",
  "trajectory",
];

export const SIGMA_RANGE: [number, number] = [0.5, 12.0];
export const ALPHA_RANGE: [number, number] = [0.01, 0.9];
export const ZOOM_RANGE: [number, number] = [1e-3, 1e4];

// Fixed color-scale endpoints (meters) so edits stay visually comparable.
export const COLOR_SCALE_RANGE: [number, number] = [0.0, 3.0];
// Accuracy at which wireless gating stops paying off for a tracker.
export const BREAK_EVEN_M = 1.5;

export interface Viewport {
  /** world meters of the screen origin */
  originX: number;
  originY: number;
  /** pixels per meter; bounded away from 0 so the transform inverts */
  zoom: number;
}

export interface ProbeView {
  /** the payload, rendered verbatim */
  result: ProbeJson;
  /** overlays accumulated while alpha sweeps (nested rings) */
  overlays: ProbeJson[];
}

export interface PlannerViewState {
  sceneId: string | null;
  viewport: Viewport;
  tool: Tool;
  sigma: number;
  alpha: number;
  fineGrid: boolean;
  heatmap: HeatmapJson | null;
  probe: ProbeView | null;
  selectedCamera: string | null;
  waypoints: [number, number][];
  banner: string | null;
}

export function initialState(): PlannerViewState {
  return {
    sceneId: null,
    viewport: { originX: -1.0, originY: -1.0, zoom: 60.0 },
    tool: "probe",
    sigma: 3.0,
    alpha: 0.05,
    fineGrid: false,
    heatmap: null,
    probe: null,
    selectedCamera: null,
    waypoints: [],
    banner: null,
  };
}

export function clamp(value: number, range: [number, number]): number {
  if (Number.isNaN(value)) return range[0];
  return Math.min(range[1], Math.max(range[0], value));
}

export function setSigma(state: PlannerViewState, sigma: number): PlannerViewState {
  return { ...state, sigma: clamp(sigma, SIGMA_RANGE) };
}

export function setAlpha(state: PlannerViewState, alpha: number): PlannerViewState {
  return { ...state, alpha: clamp(alpha, ALPHA_RANGE) };
}

export function setTool(state: PlannerViewState, tool: Tool): PlannerViewState {
  return { ...state, tool };
}

export function panZoom(
  state: PlannerViewState,
  dxPx: number,
  dyPx: number,
  zoomFactor: number,
): PlannerViewState {
  const zoom = clamp(state.viewport.zoom * zoomFactor, ZOOM_RANGE);
  return {
    ...state,
    viewport: {
      originX: state.viewport.originX - dxPx / zoom,
      originY: state.viewport.originY - dyPx / zoom,
      zoom,
    },
  };
}

export function gridFor(state: PlannerViewState): [number, number] {
  return state.fineGrid ? [160, 160] : [40, 40];
}

/** Store a heatmap payload as-is; display layers read it verbatim. */
export function setHeatmap(
  state: PlannerViewState,
  heatmap: HeatmapJson,
): PlannerViewState {
  return { ...state, heatmap, banner: null };
}

export function setProbe(
  state: PlannerViewState,
  result: ProbeJson,
): PlannerViewState {
  const overlays = state.probe ? state.probe.overlays : [];
  const keep = overlays.filter(
    (o) =>
      o.point[0] === result.point[0] &&
      o.point[1] === result.point[1] &&
      o.alpha !== result.alpha,
  );
  return {
    ...state,
    probe: { result, overlays: [...keep, result] },
    banner: result.unlocalizable ? "unlocalizable geometry" : null,
  };
}

export function clearProbe(state: PlannerViewState): PlannerViewState {
  return { ...state, probe: null };
}
