// Shared fakes: a scripted fetch and payload factories. Tests assert that the
// planner renders these payloads verbatim (adapter purity).

import type {
  HeatmapJson,
  ProbeJson,
  SceneJson,
  SceneRecordJson,
} from "../src/types.js";

export interface Call {
  url: string;
  method: string;
  body: unknown;
}

export type Route = (call: Call) => { status: number; body: unknown } | null;

export function makeFetch(routes: Route[], calls: Call[] = []) {
  const impl = async (url: string, init?: RequestInit): Promise<Response> => {
    if (init?.signal?.aborted) {
      const err = new Error("aborted");
      err.name = "AbortError";
      throw err;
    }
    const call: Call = {
      url,
      method: init?.method ?? "GET",
      body: init?.body ? JSON.parse(init.body as string) : undefined,
    };
    calls.push(call);
    for (const route of routes) {
      const hit = route(call);
      if (hit) {
        return new Response(JSON.stringify(hit.body), {
          status: hit.status,
          headers: { "content-type": "application/json" },
        });
      }
    }
    return new Response(
      JSON.stringify({ code: "UnknownRoute", message: call.url }),
      { status: 404 },
    );
  };
  return { impl, calls };
}

export function sampleScene(anchorCount = 4): SceneJson {
  const anchors = Array.from({ length: anchorCount }, (_, i) => ({
    id: `a${String(i).padStart(2, "0")}`,
    position: [i * 2.0, 0.0, 3.0] as [number, number, number],
    A: -45.0,
    B: -2.0,
  }));
  return {
    anchors,
    cameras: [
      {
        id: "cam0",
        K: [
          [900, 0, 640],
          [0, 900, 480],
          [0, 0, 1],
        ],
        R: [
          [1, 0, 0],
          [0, -1, 0],
          [0, 0, -1],
        ],
        T: [-4, 4, 9.6],
        image_size: [1280, 960] as [number, number],
      },
    ],
    noise: { type: "gaussian", sigma: 3.0 },
    bounds: [0, 0, 8, 8],
    person_height: 1.8,
  };
}

export function sceneRecord(
  scene: SceneJson,
  revision = 1,
  id = "scene-1",
): SceneRecordJson {
  return {
    scene_id: id,
    scene,
    created_at: "2024-01-01T00:00:00+00:00",
    updated_at: "2024-01-01T00:00:00+00:00",
    revision,
  };
}

export function heatmapPayload(value = 0.8): HeatmapJson {
  return {
    xs: [1, 3, 5, 7],
    ys: [1, 3, 5, 7],
    rmse: [
      [value, value, value, value],
      [value, null, value, value],
      [value, value, 2 * value, value],
      [value, value, value, value],
    ],
  };
}

/** A circular confidence boundary of the given radius around the point. */
export function probePayload(
  point: [number, number],
  alpha: number,
  radius: number,
  n = 16,
): ProbeJson {
  const boundary: [number, number][] = Array.from({ length: n }, (_, k) => {
    const t = (2 * Math.PI * k) / n;
    return [point[0] + radius * Math.cos(t), point[1] + radius * Math.sin(t)];
  });
  const info = 1.0 / (radius * radius);
  return {
    point,
    alpha,
    sigma: 3.0,
    unlocalizable: false,
    best_rmse_m: radius * Math.SQRT2,
    ellipse: {
      center: point,
      fim: [
        [info, 0],
        [0, info],
      ],
      alpha,
      threshold: 1.0,
    },
    boundary,
    cameras: [
      {
        camera_id: "cam0",
        image_size: [1280, 960],
        polygon: [
          [600, 400],
          [700, 400],
          [700, 500],
          [600, 500],
        ],
        box: [600, 400, 700, 500],
      },
    ],
  };
}
