"""HTTP front door for the deployment planner.

Every computational endpoint is a thin adapter over the library: it parses
the body, calls the corresponding operation, and serializes the result.
Bodies are validated by hand so every failure mode produces the same error
shape, {"code", "message", "detail"}.
"""

from __future__ import annotations

import dataclasses
import json
import os
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles

from .errors import (
    CrbGateError,
    DomainError,
    InsufficientAnchors,
    SingularFim,
    StaleRevision,
    StreamOrderViolation,
    UnknownScene,
    ValidationError,
)
from .gate import gate_stream, stream_to_jsonl
from .scene import default_targets
from .simulate import crb_heatmap, probe_point, run_coverage, run_mse
from .store import SceneStore
from .wireless import GaussianNoise, read_measurements

DEFAULT_TRIAL_CAP = 10_000


def _error_response(status: int, code: str, message: str, detail=None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "detail": detail},
    )


def _status_for(exc: CrbGateError) -> int:
    if isinstance(exc, UnknownScene):
        return 404
    if isinstance(exc, StaleRevision):
        return 409
    if isinstance(exc, (InsufficientAnchors, SingularFim)):
        return 422
    return 400


async def _json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except json.JSONDecodeError as exc:
        raise ValidationError(f"body is not valid JSON: {exc}") from exc
    if not isinstance(body, dict):
        raise ValidationError("body must be a JSON object")
    return body


def _field(body: dict, name: str, kind, default=...):
    if name not in body:
        if default is ...:
            raise ValidationError(f"missing field {name!r}")
        return default
    try:
        return kind(body[name])
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"field {name!r}: {exc}") from exc


def create_app(data_dir=None, trial_cap: int = DEFAULT_TRIAL_CAP, ui_dir=None) -> FastAPI:
    data_dir = data_dir or os.environ.get("CRBGATE_DATA_DIR", "./crbgate-data")
    store = SceneStore(data_dir)
    app = FastAPI(title="crbgate planner service")
    app.state.store = store

    @app.exception_handler(CrbGateError)
    async def _handle(request: Request, exc: CrbGateError):
        detail = None
        if isinstance(exc, SingularFim):
            detail = {"eigenvalues": list(exc.eigenvalues)}
        if isinstance(exc, StaleRevision):
            detail = {"expected": exc.expected, "current": exc.current}
        return _error_response(
            _status_for(exc), type(exc).__name__, str(exc), detail
        )

    @app.get("/health")
    async def health():
        return {"status": "ok"}

    @app.get("/scenes")
    async def list_scenes():
        return {"scenes": store.list_ids()}

    @app.post("/scenes", status_code=201)
    async def create_scene(request: Request):
        body = await _json_body(request)
        return store.create(body).to_json()

    @app.get("/scenes/{scene_id}")
    async def get_scene(scene_id: str):
        return store.get(scene_id).to_json()

    @app.put("/scenes/{scene_id}")
    async def put_scene(scene_id: str, request: Request):
        body = await _json_body(request)
        if "scene" not in body or "revision" not in body:
            raise ValidationError('PUT body must be {"scene": ..., "revision": ...}')
        revision = _field(body, "revision", int)
        return store.update(scene_id, body["scene"], revision).to_json()

    @app.post("/scenes/{scene_id}/heatmap")
    async def heatmap(scene_id: str, request: Request):
        body = await _json_body(request)
        record = store.get(scene_id)
        scene = record.scene
        sigma = _field(body, "sigma", float, default=None)
        grid = _field(body, "grid", list, default=[40, 40])
        if len(grid) != 2:
            raise ValidationError("grid must be [nx, ny]")
        if sigma is not None:
            if sigma <= 0:
                raise ValidationError("sigma must be > 0")
            scene = dataclasses.replace(scene, noise=GaussianNoise(sigma))
        result = crb_heatmap(scene, (int(grid[0]), int(grid[1])))
        out = result.to_json()
        out["sigma"] = sigma
        out["scene_revision"] = record.revision
        return out

    @app.post("/scenes/{scene_id}/simulate")
    async def simulate(scene_id: str, request: Request):
        body = await _json_body(request)
        scene = store.get(scene_id).scene
        sigmas = _field(body, "sigmas", list)
        trials = _field(body, "trials", int)
        seed = _field(body, "seed", int, default=0)
        if not sigmas or any(not isinstance(s, (int, float)) or s <= 0 for s in sigmas):
            raise ValidationError("sigmas must be a non-empty list of positive dBm")
        if trials < 1:
            raise ValidationError("trials must be >= 1")
        if trials * len(sigmas) > trial_cap:
            raise ValidationError(
                f"request exceeds the trial cap ({trial_cap} total trials)"
            )
        report = run_mse(
            scene, [float(s) for s in sigmas], trials, default_targets(scene), seed
        )
        return report.to_json()

    @app.post("/scenes/{scene_id}/probe")
    async def probe(scene_id: str, request: Request):
        body = await _json_body(request)
        scene = store.get(scene_id).scene
        point = _field(body, "point", list)
        if len(point) != 2:
            raise ValidationError("point must be [x, y]")
        alpha = _field(body, "alpha", float, default=0.05)
        if not (0.0 < alpha < 1.0):
            raise DomainError("alpha must be in (0, 1)")
        sigma = _field(body, "sigma", float, default=None)
        if sigma is not None:
            if sigma <= 0:
                raise ValidationError("sigma must be > 0")
            scene = dataclasses.replace(scene, noise=GaussianNoise(sigma))
        n_points = _field(body, "n_points", int, default=64)
        if not (3 <= n_points <= 4096):
            raise ValidationError("n_points must be in [3, 4096]")
        try:
            result = probe_point(
                scene, (float(point[0]), float(point[1])), alpha, n_points
            )
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"bad point: {exc}") from exc
        return result.to_json()

    @app.post("/scenes/{scene_id}/coverage")
    async def coverage(scene_id: str, request: Request):
        body = await _json_body(request)
        scene = store.get(scene_id).scene
        alpha = _field(body, "alpha", float)
        trials = _field(body, "trials", int)
        seed = _field(body, "seed", int, default=0)
        if not (0.0 < alpha < 1.0):
            raise DomainError("alpha must be in (0, 1)")
        if trials < 1 or trials > trial_cap:
            raise ValidationError(f"trials must be in [1, {trial_cap}]")
        value = run_coverage(scene, alpha, trials, default_targets(scene), seed)
        return {"alpha": alpha, "trials": trials, "coverage": value}

    @app.post("/scenes/{scene_id}/gate")
    async def gate(scene_id: str, request: Request, alpha: float = 0.05):
        scene = store.get(scene_id).scene
        if not (0.0 < alpha < 1.0):
            raise DomainError("alpha must be in (0, 1)")
        raw = (await request.body()).decode("utf-8")
        frames = read_measurements(raw.splitlines())
        ts = [f.timestamp for f in frames]
        if any(b < a for a, b in zip(ts, ts[1:])):
            raise StreamOrderViolation("timestamps must be non-decreasing")
        return StreamingResponse(
            stream_to_jsonl(gate_stream(scene, frames, alpha)),
            media_type="application/x-ndjson",
        )

    ui = Path(ui_dir) if ui_dir else None
    if ui and ui.is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui), html=True), name="ui")

    return app
