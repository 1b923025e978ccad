// View state <-> URL query round trip, so a planning session is shareable.

import {
  ALPHA_RANGE,
  SIGMA_RANGE,
  TOOLS,
  clamp,
  initialState,
  type PlannerViewState,
  type Tool,
} from "./state.js";

export function stateToQuery(state: PlannerViewState): string {
  const q = new URLSearchParams();
  if (state.sceneId) q.set("scene", state.sceneId);
  q.set("sigma", String(state.sigma));
  q.set("alpha", String(state.alpha));
  q.set("tool", state.tool);
  q.set("ox", String(state.viewport.originX));
  q.set("oy", String(state.viewport.originY));
  q.set("zoom", String(state.viewport.zoom));
  if (state.fineGrid) q.set("fine", "1");
  if (state.selectedCamera) q.set("camera", state.selectedCamera);
  if (state.waypoints.length) {
    q.set("wp", state.waypoints.map(([x, y]) => `${x},${y}`).join(";"));
  }
  return q.toString();
}

export function stateFromQuery(query: string): PlannerViewState {
  const q = new URLSearchParams(query);
  const state = initialState();
  const num = (key: string, fallback: number) => {
    const raw = q.get(key);
    // Number("") is 0, so blank params must count as missing
    const v = raw === null || raw.trim() === "" ? NaN : Number(raw);
    return Number.isFinite(v) ? v : fallback;
  };
  state.sceneId = q.get("scene");
  state.sigma = clamp(num("sigma", state.sigma), SIGMA_RANGE);
  state.alpha = clamp(num("alpha", state.alpha), ALPHA_RANGE);
  const tool = q.get("tool");
  if (tool && (TOOLS as string[]).includes(tool)) state.tool = tool as Tool;
  state.viewport = {
    originX: num("ox", state.viewport.originX),
    originY: num("oy", state.viewport.originY),
    zoom: Math.max(1e-3, num("zoom", state.viewport.zoom)),
  };
  state.fineGrid = q.get("fine") === "1";
  state.selectedCamera = q.get("camera");
  const wp = q.get("wp");
  if (wp) {
    state.waypoints = wp
      .split(";")
      .map((pair) => pair.split(",").map(Number) as [number, number])
      .filter(([x, y]) => Number.isFinite(x) && Number.isFinite(y));
  }
  return state;
}
