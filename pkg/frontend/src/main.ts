// Browser bootstrap: binds the controller to the DOM. Pure glue; every
// displayed quantity originates in a service payload.

import { PlannerApi } from "./api.js";
import { formatCm } from "./color.js";
import { nearestIndex, screenToWorld } from "./geometry.js";
import { PlannerController } from "./planner.js";
import { initialState, TOOLS, type Tool } from "./state.js";
import type { SceneJson } from "./types.js";
import { stateFromQuery, stateToQuery } from "./url.js";

const DEFAULT_SCENE_URL = "./default-scene.json";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function bootstrap(): Promise<void> {
  const api = new PlannerApi("");
  const controller = new PlannerController(
    api,
    stateFromQuery(location.search.replace(/^\?/, "")),
  );

  const canvas = el<HTMLCanvasElement>("floor");
  const panel = el<HTMLCanvasElement>("camera-panel");
  const readout = el<HTMLSpanElement>("probe-readout");
  const banner = el<HTMLDivElement>("banner");
  const sigmaSlider = el<HTMLInputElement>("sigma");
  const alphaSlider = el<HTMLInputElement>("alpha");
  const sigmaLabel = el<HTMLSpanElement>("sigma-label");
  const alphaLabel = el<HTMLSpanElement>("alpha-label");
  const toolSelect = el<HTMLSelectElement>("tool");
  const cameraSelect = el<HTMLSelectElement>("camera");
  const fineToggle = el<HTMLInputElement>("fine");

  TOOLS.forEach((tool) => {
    const opt = document.createElement("option");
    opt.value = tool;
    opt.textContent = tool;
    toolSelect.appendChild(opt);
  });

  const { drawFloorplan, drawCameraPanel } = await import("./render.js");

  const redraw = () => {
    const state = controller.state;
    const scene = controller.scene;
    const ctx = canvas.getContext("2d")!;
    drawFloorplan(ctx, canvas.width, canvas.height, state, scene);
    drawCameraPanel(
      panel.getContext("2d")!,
      panel.width,
      panel.height,
      controller.cameraPreview(),
    );
    readout.textContent = state.probe
      ? formatCm(state.probe.result.best_rmse_m)
      : "—";
    banner.textContent = state.banner ?? "";
    banner.style.display = state.banner ? "block" : "none";
    sigmaLabel.textContent = `${state.sigma.toFixed(1)} dBm`;
    alphaLabel.textContent = state.alpha.toFixed(2);
    if (scene) {
      const current = new Set(
        Array.from(cameraSelect.options).map((o) => o.value),
      );
      const wanted = scene.cameras.map((c) => c.id);
      if (
        wanted.length + 1 !== current.size ||
        wanted.some((id) => !current.has(id))
      ) {
        cameraSelect.innerHTML = "<option value=''>(none)</option>";
        for (const cam of scene.cameras) {
          const opt = document.createElement("option");
          opt.value = cam.id;
          opt.textContent = cam.id;
          cameraSelect.appendChild(opt);
        }
      }
    }
    history.replaceState(null, "", `?${stateToQuery(state)}`);
  };
  controller.subscribe(redraw);

  sigmaSlider.addEventListener("input", () => {
    controller.onSigmaSlider(Number(sigmaSlider.value));
  });
  alphaSlider.addEventListener("input", () => {
    controller.onAlphaSlider(Number(alphaSlider.value));
  });
  toolSelect.addEventListener("change", () => {
    controller.state.tool = toolSelect.value as Tool;
  });
  cameraSelect.addEventListener("change", () => {
    controller.selectCamera(cameraSelect.value || null);
  });
  fineToggle.addEventListener("change", () => {
    controller.setFineGrid(fineToggle.checked);
  });

  let dragging: string | null = null;
  canvas.addEventListener("pointerdown", (ev) => {
    const scene = controller.scene;
    if (!scene) return;
    const rect = canvas.getBoundingClientRect();
    const [wx, wy] = screenToWorld(
      controller.state.viewport,
      ev.clientX - rect.left,
      ev.clientY - rect.top,
    );
    const tool = controller.state.tool;
    if (tool === "probe") {
      void controller.probePoint(wx, wy);
    } else if (tool === "add-anchor") {
      void controller.addAnchor(wx, wy);
    } else if (tool === "trajectory") {
      controller.state.waypoints.push([wx, wy]);
      redraw();
    } else {
      const anchors: [number, number][] = scene.anchors.map((a) => [
        a.position[0],
        a.position[1],
      ]);
      const { index, distance } = nearestIndex(anchors, wx, wy);
      if (index < 0 || distance > 0.5) return;
      const id = scene.anchors[index].id;
      if (tool === "delete-anchor") void controller.deleteAnchor(id);
      else dragging = id;
    }
  });
  canvas.addEventListener("pointermove", (ev) => {
    if (!dragging) return;
    const rect = canvas.getBoundingClientRect();
    const [wx, wy] = screenToWorld(
      controller.state.viewport,
      ev.clientX - rect.left,
      ev.clientY - rect.top,
    );
    void controller.moveAnchor(dragging, wx, wy);
  });
  canvas.addEventListener("pointerup", () => {
    dragging = null;
  });

  const state = controller.state;
  if (state.sceneId) {
    await controller.loadScene(state.sceneId);
  } else {
    const listing = await api.listScenes();
    if (listing.scenes.length > 0) {
      await controller.loadScene(listing.scenes[0].scene_id);
    } else {
      const template = (await (await fetch(DEFAULT_SCENE_URL)).json()) as SceneJson;
      await controller.createScene(template);
    }
  }
  redraw();
}

void bootstrap();
