"""File-backed scene persistence: one JSON file per scene, atomic writes,
optimistic concurrency through revision numbers."""

from __future__ import annotations

import json
import os
import tempfile
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import List

from .errors import StaleRevision, UnknownScene, ValidationError
from .scene import Scene, scene_from_json, scene_to_json


@dataclass(frozen=True)
class SceneRecord:
    scene_id: str
    scene: Scene
    created_at: str
    updated_at: str
    revision: int

    def to_json(self) -> dict:
        return {
            "scene_id": self.scene_id,
            "scene": scene_to_json(self.scene),
            "created_at": self.created_at,
            "updated_at": self.updated_at,
            "revision": self.revision,
        }


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


def record_bytes(record: SceneRecord) -> bytes:
    """Canonical serialization; identical records produce identical bytes."""
    return (
        json.dumps(record.to_json(), sort_keys=True, separators=(",", ":")) + "\n"
    ).encode("utf-8")


class SceneStore:
    """Scenes under a data directory; mutations serialize per scene id."""

    def __init__(self, data_dir):
        self._dir = Path(data_dir)
        self._dir.mkdir(parents=True, exist_ok=True)
        self._locks = {}
        self._locks_guard = threading.Lock()

    def _lock(self, scene_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(scene_id, threading.Lock())

    def _path(self, scene_id: str) -> Path:
        if not scene_id or "/" in scene_id or scene_id.startswith("."):
            raise UnknownScene(f"no scene {scene_id!r}")
        return self._dir / f"{scene_id}.json"

    def _write(self, record: SceneRecord) -> None:
        path = self._path(record.scene_id)
        fd, tmp = tempfile.mkstemp(dir=self._dir, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(record_bytes(record))
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def create(self, scene_json: dict) -> SceneRecord:
        scene = scene_from_json(scene_json)
        now = _now()
        record = SceneRecord(
            scene_id=str(uuid.uuid4()),
            scene=scene,
            created_at=now,
            updated_at=now,
            revision=1,
        )
        with self._lock(record.scene_id):
            self._write(record)
        return record

    def get(self, scene_id: str) -> SceneRecord:
        path = self._path(scene_id)
        try:
            with open(path, "r", encoding="utf-8") as fh:
                obj = json.load(fh)
        except FileNotFoundError:
            raise UnknownScene(f"no scene {scene_id!r}") from None
        except json.JSONDecodeError as exc:
            raise ValidationError(f"corrupt scene file {path}: {exc}") from exc
        return SceneRecord(
            scene_id=str(obj["scene_id"]),
            scene=scene_from_json(obj["scene"]),
            created_at=str(obj["created_at"]),
            updated_at=str(obj["updated_at"]),
            revision=int(obj["revision"]),
        )

    def update(self, scene_id: str, scene_json: dict, expected_revision: int) -> SceneRecord:
        scene = scene_from_json(scene_json)
        with self._lock(scene_id):
            current = self.get(scene_id)
            if current.revision != int(expected_revision):
                raise StaleRevision(scene_id, int(expected_revision), current.revision)
            record = SceneRecord(
                scene_id=scene_id,
                scene=scene,
                created_at=current.created_at,
                updated_at=_now(),
                revision=current.revision + 1,
            )
            self._write(record)
        return record

    def list_ids(self) -> List[dict]:
        out = []
        for path in sorted(self._dir.glob("*.json")):
            try:
                rec = self.get(path.stem)
            except (UnknownScene, ValidationError, KeyError):
                continue
            out.append(
                {
                    "scene_id": rec.scene_id,
                    "revision": rec.revision,
                    "updated_at": rec.updated_at,
                    "anchors": len(rec.scene.anchors),
                    "cameras": len(rec.scene.cameras),
                }
            )
        return out
