// Planner controller: wires the view state to the service. Every number that
// reaches the screen comes from a service payload; this module only decides
// when to fetch and what to keep.

import { ApiError, PlannerApi } from "./api.js";
import { debounce, LatestOnly, type Debounced } from "./debounce.js";
import {
  gridFor,
  initialState,
  setAlpha,
  setHeatmap,
  setProbe,
  setSigma,
  type PlannerViewState,
} from "./state.js";
import type { SceneJson, SceneRecordJson } from "./types.js";

export const HEATMAP_DEBOUNCE_MS = 300;

type Listener = (state: PlannerViewState) => void;

export class PlannerController {
  private readonly api: PlannerApi;
  private stateValue: PlannerViewState;
  private record: SceneRecordJson | null = null;
  private readonly listeners: Listener[] = [];
  private readonly heatmapGate = new LatestOnly();
  private readonly probeGate = new LatestOnly();
  private readonly scheduleHeatmap: Debounced<[]>;

  constructor(api: PlannerApi, state: PlannerViewState = initialState()) {
    this.api = api;
    this.stateValue = state;
    this.scheduleHeatmap = debounce(() => {
      void this.refreshHeatmap();
    }, HEATMAP_DEBOUNCE_MS);
  }

  get state(): PlannerViewState {
    return this.stateValue;
  }

  get scene(): SceneJson | null {
    return this.record ? this.record.scene : null;
  }

  get revision(): number | null {
    return this.record ? this.record.revision : null;
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private commit(next: PlannerViewState): void {
    this.stateValue = next;
    for (const l of this.listeners) l(next);
  }

  // --- scene lifecycle -------------------------------------------------

  async loadScene(sceneId: string): Promise<void> {
    this.record = await this.api.getScene(sceneId);
    this.commit({ ...this.stateValue, sceneId });
    await this.refreshHeatmap();
  }

  async createScene(scene: SceneJson): Promise<string> {
    this.record = await this.api.createScene(scene);
    this.commit({ ...this.stateValue, sceneId: this.record.scene_id });
    await this.refreshHeatmap();
    return this.record.scene_id;
  }

  // --- anchor editing ---------------------------------------------------

  /**
   * Apply a scene mutation optimistically, reconcile with the server, and
   * schedule one debounced heatmap refresh. A stale-revision conflict
   * reloads the scene and replays the same edit once.
   */
  async editAnchors(mutate: (scene: SceneJson) => SceneJson): Promise<void> {
    if (!this.record) throw new Error("no scene loaded");
    const optimistic = mutate(structuredClone(this.record.scene));
    const previous = this.record;
    this.record = { ...previous, scene: optimistic };
    this.commit({ ...this.stateValue });
    try {
      this.record = await this.api.putScene(
        previous.scene_id,
        optimistic,
        previous.revision,
      );
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // stale revision: reload, replay the edit on the fresh scene
        const fresh = await this.api.getScene(previous.scene_id);
        const replayed = mutate(structuredClone(fresh.scene));
        this.record = await this.api.putScene(
          fresh.scene_id,
          replayed,
          fresh.revision,
        );
      } else {
        this.record = previous; // roll the optimistic update back
        this.commit({ ...this.stateValue, banner: describe(err) });
        throw err;
      }
    }
    this.commit({ ...this.stateValue });
    this.scheduleHeatmap();
  }

  addAnchor(x: number, y: number, height = 3.0): Promise<void> {
    return this.editAnchors((scene) => {
      const used = new Set(scene.anchors.map((a) => a.id));
      let k = scene.anchors.length;
      while (used.has(`a${String(k).padStart(2, "0")}`)) k += 1;
      const template = scene.anchors[0] ?? { A: -45.0, B: -2.0 };
      scene.anchors.push({
        id: `a${String(k).padStart(2, "0")}`,
        position: [x, y, height],
        A: template.A,
        B: template.B,
      });
      return scene;
    });
  }

  moveAnchor(id: string, x: number, y: number): Promise<void> {
    return this.editAnchors((scene) => {
      const anchor = scene.anchors.find((a) => a.id === id);
      if (anchor) anchor.position = [x, y, anchor.position[2]];
      return scene;
    });
  }

  deleteAnchor(id: string): Promise<void> {
    return this.editAnchors((scene) => {
      scene.anchors = scene.anchors.filter((a) => a.id !== id);
      return scene;
    });
  }

  // --- heatmap ----------------------------------------------------------

  async refreshHeatmap(): Promise<void> {
    if (!this.record) return;
    const id = this.record.scene_id;
    const { sigma } = this.stateValue;
    try {
      const grid = await this.heatmapGate.run((signal) =>
        this.api.heatmap(id, sigma, gridFor(this.stateValue), signal),
      );
      this.commit(setHeatmap(this.stateValue, grid));
    } catch (err) {
      if (isAbort(err)) return; // superseded by a newer request
      if (err instanceof ApiError && err.status === 422) {
        this.commit({ ...this.stateValue, banner: "unlocalizable geometry" });
        return;
      }
      this.commit({ ...this.stateValue, banner: describe(err) });
    }
  }

  setFineGrid(fine: boolean): void {
    this.commit({ ...this.stateValue, fineGrid: fine });
    this.scheduleHeatmap();
  }

  // --- sliders ------------------------------------------------------------

  /** Slider motion: clamp, then coalesce server work behind the debounce. */
  onSigmaSlider(value: number): void {
    this.commit(setSigma(this.stateValue, value));
    this.scheduleHeatmap();
    void this.reprobe();
  }

  onAlphaSlider(value: number): void {
    this.commit(setAlpha(this.stateValue, value));
    void this.reprobe();
  }

  // --- probe ----------------------------------------------------------------

  async probePoint(x: number, y: number): Promise<void> {
    if (!this.record) return;
    try {
      const result = await this.probeGate.run((signal) =>
        this.api.probe(
          this.record!.scene_id,
          [x, y],
          this.stateValue.alpha,
          this.stateValue.sigma,
          signal,
        ),
      );
      this.commit(setProbe(this.stateValue, result));
    } catch (err) {
      if (isAbort(err)) return;
      this.commit({ ...this.stateValue, banner: describe(err) });
    }
  }

  private async reprobe(): Promise<void> {
    const probe = this.stateValue.probe;
    if (!probe) return;
    await this.probePoint(probe.result.point[0], probe.result.point[1]);
  }

  // --- camera preview ---------------------------------------------------

  selectCamera(cameraId: string | null): void {
    this.commit({ ...this.stateValue, selectedCamera: cameraId });
  }

  /** The probe payload's entry for the selected camera, verbatim. */
  cameraPreview() {
    const probe = this.stateValue.probe;
    const cameraId = this.stateValue.selectedCamera;
    if (!probe || !cameraId) return null;
    return (
      probe.result.cameras.find((c) => c.camera_id === cameraId) ?? null
    );
  }

  flushPendingHeatmap(): void {
    this.scheduleHeatmap.flush();
  }
}

function isAbort(err: unknown): boolean {
  return err instanceof Error && err.name === "AbortError";
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `${err.code}: ${err.message}`;
  return err instanceof Error ? err.message : String(err);
}
