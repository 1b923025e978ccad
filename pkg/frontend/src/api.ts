// Thin typed client over the planner service. `fetch` is injectable so tests
// can mock the wire without a server.

import type {
  ApiErrorJson,
  HeatmapJson,
  ProbeJson,
  SceneJson,
  SceneRecordJson,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly detail: unknown;

  constructor(status: number, body: ApiErrorJson) {
    super(body.message);
    this.status = status;
    this.code = body.code;
    this.detail = body.detail;
  }
}

async function toError(resp: Response): Promise<ApiError> {
  let body: ApiErrorJson = { code: "HttpError", message: `HTTP ${resp.status}` };
  try {
    body = (await resp.json()) as ApiErrorJson;
  } catch {
    // non-JSON error body: keep the fallback
  }
  return new ApiError(resp.status, body);
}

export class PlannerApi {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(base = "", fetchImpl: FetchLike = fetch.bind(globalThis)) {
    this.base = base.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
    signal?: AbortSignal,
  ): Promise<T> {
    const resp = await this.fetchImpl(this.base + path, {
      method,
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
      signal,
    });
    if (!resp.ok) throw await toError(resp);
    return (await resp.json()) as T;
  }

  listScenes(): Promise<{ scenes: { scene_id: string }[] }> {
    return this.request("GET", "/scenes");
  }

  getScene(id: string): Promise<SceneRecordJson> {
    return this.request("GET", `/scenes/${id}`);
  }

  createScene(scene: SceneJson): Promise<SceneRecordJson> {
    return this.request("POST", "/scenes", scene);
  }

  putScene(
    id: string,
    scene: SceneJson,
    revision: number,
  ): Promise<SceneRecordJson> {
    return this.request("PUT", `/scenes/${id}`, { scene, revision });
  }

  heatmap(
    id: string,
    sigma: number,
    grid: [number, number],
    signal?: AbortSignal,
  ): Promise<HeatmapJson> {
    return this.request("POST", `/scenes/${id}/heatmap`, { sigma, grid }, signal);
  }

  probe(
    id: string,
    point: [number, number],
    alpha: number,
    sigma: number,
    signal?: AbortSignal,
  ): Promise<ProbeJson> {
    return this.request(
      "POST",
      `/scenes/${id}/probe`,
      { point, alpha, sigma },
      signal,
    );
  }
}
