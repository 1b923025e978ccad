import concurrent.futures
import json

import pytest

import crbgate as cg
from crbgate.store import record_bytes


class TestSceneJson:
    def test_round_trip(self, study_scene):
        obj = cg.scene_to_json(study_scene)
        scene2 = cg.scene_from_json(obj)
        assert cg.scene_to_json(scene2) == obj

    def test_unknown_field_rejected(self, study_scene):
        obj = cg.scene_to_json(study_scene)
        obj["wifi_channels"] = [1, 6, 11]
        with pytest.raises(cg.ValidationError):
            cg.scene_from_json(obj)

    def test_anchor_b_zero_rejected(self, study_scene):
        obj = cg.scene_to_json(study_scene)
        obj["anchors"][0]["B"] = 0.0
        with pytest.raises(cg.ValidationError):
            cg.scene_from_json(obj)

    def test_non_gaussian_noise_rejected(self, study_scene):
        obj = cg.scene_to_json(study_scene)
        obj["noise"] = {"type": "student-t", "dof": 3}
        with pytest.raises(cg.ValidationError):
            cg.scene_from_json(obj)

    def test_empirical_noise_not_serializable(self):
        scene = cg.Scene(
            anchors=(),
            noise=cg.EmpiricalNoise(
                log_density=lambda v: -abs(v), sampler=lambda rng, n: rng.normal(size=n)
            ),
            bounds=(0, 0, 1, 1),
        )
        with pytest.raises(cg.ValidationError):
            cg.scene_to_json(scene)

    def test_degenerate_bounds_rejected(self):
        with pytest.raises(cg.ValidationError):
            cg.Scene(anchors=(), noise=cg.GaussianNoise(1.0), bounds=(0, 0, 0, 5))

    def test_default_scene_shape(self, study_scene):
        assert len(study_scene.anchors) == 32
        assert study_scene.bounds == (0.0, 0.0, 8.0, 8.0)
        ids = {a.id for a in study_scene.anchors}
        assert len(ids) == 32


class TestSceneStore:
    def test_create_get(self, tmp_path, study_scene):
        store = cg.SceneStore(tmp_path)
        rec = store.create(cg.scene_to_json(study_scene))
        assert rec.revision == 1
        got = store.get(rec.scene_id)
        assert cg.scene_to_json(got.scene) == cg.scene_to_json(study_scene)
        assert got.created_at == rec.created_at

    def test_persistence_round_trip_bytes(self, tmp_path, study_scene):
        store = cg.SceneStore(tmp_path)
        rec = store.create(cg.scene_to_json(study_scene))
        path = tmp_path / f"{rec.scene_id}.json"
        first = path.read_bytes()
        # read back and rewrite: identical bytes
        again = store.get(rec.scene_id)
        assert record_bytes(again) == first

    def test_update_bumps_revision(self, tmp_path, study_scene):
        store = cg.SceneStore(tmp_path)
        rec = store.create(cg.scene_to_json(study_scene))
        obj = cg.scene_to_json(study_scene)
        obj["person_height"] = 1.9
        rec2 = store.update(rec.scene_id, obj, expected_revision=1)
        assert rec2.revision == 2
        assert store.get(rec.scene_id).scene.person_height == 1.9

    def test_stale_revision_rejected(self, tmp_path, study_scene):
        store = cg.SceneStore(tmp_path)
        rec = store.create(cg.scene_to_json(study_scene))
        obj = cg.scene_to_json(study_scene)
        store.update(rec.scene_id, obj, expected_revision=1)
        with pytest.raises(cg.StaleRevision):
            store.update(rec.scene_id, obj, expected_revision=1)

    def test_unknown_scene(self, tmp_path):
        store = cg.SceneStore(tmp_path)
        with pytest.raises(cg.UnknownScene):
            store.get("nope")

    def test_concurrent_updates_exactly_one_wins(self, tmp_path, study_scene):
        store = cg.SceneStore(tmp_path)
        rec = store.create(cg.scene_to_json(study_scene))
        obj = cg.scene_to_json(study_scene)

        def attempt(i):
            payload = dict(obj)
            payload["person_height"] = 1.5 + 0.01 * i
            try:
                store.update(rec.scene_id, payload, expected_revision=1)
                return "win"
            except cg.StaleRevision:
                return "stale"

        with concurrent.futures.ThreadPoolExecutor(max_workers=8) as pool:
            outcomes = list(pool.map(attempt, range(8)))
        assert outcomes.count("win") == 1
        assert store.get(rec.scene_id).revision == 2

    def test_list_ids(self, tmp_path, study_scene):
        store = cg.SceneStore(tmp_path)
        a = store.create(cg.scene_to_json(study_scene))
        b = store.create(cg.scene_to_json(study_scene))
        ids = {item["scene_id"] for item in store.list_ids()}
        assert ids == {a.scene_id, b.scene_id}
