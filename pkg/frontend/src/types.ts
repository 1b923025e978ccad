// Wire types mirroring the planner service's JSON payloads. The UI never
// computes information matrices, bounds, or projections itself; it renders
// these payloads verbatim.

export interface AnchorJson {
  id: string;
  position: [number, number, number];
  A: number;
  B: number;
}

export interface CameraJson {
  id: string;
  K: number[][];
  R: number[][];
  T: number[];
  image_size: [number, number];
}

export interface SceneJson {
  anchors: AnchorJson[];
  cameras: CameraJson[];
  noise: { type: "gaussian"; sigma: number };
  bounds: [number, number, number, number];
  person_height: number;
}

export interface SceneRecordJson {
  scene_id: string;
  scene: SceneJson;
  created_at: string;
  updated_at: string;
  revision: number;
}

export interface HeatmapJson {
  xs: number[];
  ys: number[];
  rmse: (number | null)[][];
  sigma?: number | null;
  scene_revision?: number;
}

export interface EllipseJson {
  center: [number, number];
  fim: number[][];
  alpha: number;
  threshold: number;
}

export interface ProbeCameraJson {
  camera_id: string;
  image_size?: [number, number];
  polygon?: [number, number][];
  box?: [number, number, number, number];
  skipped?: string;
}

export interface ProbeJson {
  point: [number, number];
  alpha: number;
  sigma: number | null;
  unlocalizable: boolean;
  best_rmse_m: number | null;
  ellipse: EllipseJson | null;
  boundary: [number, number][] | null;
  cameras: ProbeCameraJson[];
}

export interface ApiErrorJson {
  code: string;
  message: string;
  detail?: unknown;
}
