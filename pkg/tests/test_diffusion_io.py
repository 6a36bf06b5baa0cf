"""Checkpoint and dataset directory formats: roundtrips and schema guards."""

import json

import numpy as np
import pytest

from graspsynth.diffusion import (
    DenoiserConfig,
    GraspRecord,
    init_denoiser,
    linear_schedule,
    load_checkpoint,
    load_dataset,
    save_checkpoint,
    save_dataset,
)
from graspsynth.geometry import make_box, make_icosphere, random_rotation
from graspsynth.hands import HandPose

CFG = DenoiserConfig(width=8, attn_heads=1, fusion_layers=1, object_points=8, hand_points=16)


def small_record(object_id="box", seed=0):
    vec = np.zeros(27)
    vec[:3] = [0.01, 0.02, 0.03]
    vec[3:7] = [0.1, 0.5, -0.1, 0.9]
    return GraspRecord(
        hand_class=0,
        pose=HandPose.from_vector(vec),
        rotation=random_rotation(seed=seed),
        object_id=object_id,
    )


class TestCheckpoint:
    def test_roundtrip_preserves_structure(self, tmp_path):
        params = init_denoiser(CFG, seed=1)
        sched = linear_schedule(50)
        save_checkpoint(tmp_path / "ckpt", params, sched)
        loaded, sched2 = load_checkpoint(tmp_path / "ckpt")
        assert loaded.config == CFG
        assert set(loaded.tensors) == set(params.tensors)
        assert sched2.steps == 50
        np.testing.assert_allclose(sched2.betas, sched.betas, rtol=1e-7)
        for name in params.tensors:
            np.testing.assert_allclose(
                loaded.tensors[name].data, params.tensors[name].data, atol=1e-6
            )

    def test_save_load_save_is_fixed_point(self, tmp_path):
        # float32 quantization happens once; a second roundtrip is exact
        params = init_denoiser(CFG, seed=2)
        sched = linear_schedule(10)
        save_checkpoint(tmp_path / "a", params, sched)
        p1, s1 = load_checkpoint(tmp_path / "a")
        save_checkpoint(tmp_path / "b", p1, s1)
        p2, _ = load_checkpoint(tmp_path / "b")
        for name in p1.tensors:
            np.testing.assert_array_equal(p1.tensors[name].data, p2.tensors[name].data)

    def test_loaded_parameters_are_trainable(self, tmp_path):
        params = init_denoiser(CFG, seed=0)
        save_checkpoint(tmp_path / "c", params, linear_schedule(10))
        loaded, _ = load_checkpoint(tmp_path / "c")
        assert all(t.requires_grad for t in loaded.trainable())

    def test_wrong_schema_rejected(self, tmp_path):
        params = init_denoiser(CFG, seed=0)
        save_checkpoint(tmp_path / "d", params, linear_schedule(10))
        manifest = tmp_path / "d" / "manifest.json"
        doc = json.loads(manifest.read_text())
        doc["schema"] = "something_else"
        manifest.write_text(json.dumps(doc))
        with pytest.raises(ValueError, match="schema"):
            load_checkpoint(tmp_path / "d")

    def test_tampered_schedule_length_rejected(self, tmp_path):
        params = init_denoiser(CFG, seed=0)
        save_checkpoint(tmp_path / "e", params, linear_schedule(10))
        manifest = tmp_path / "e" / "manifest.json"
        doc = json.loads(manifest.read_text())
        doc["schedule"]["steps"] = 11
        manifest.write_text(json.dumps(doc))
        with pytest.raises(ValueError, match="schedule"):
            load_checkpoint(tmp_path / "e")


class TestDataset:
    def test_roundtrip(self, tmp_path):
        objects = {
            "box": make_box((0.04, 0.05, 0.06)),
            "ball": make_icosphere(0.03, subdivisions=1),
        }
        records = [small_record("box", seed=0), small_record("ball", seed=1)]
        save_dataset(tmp_path / "ds", objects, records, cloud_points=64, seed=3)
        ds = load_dataset(tmp_path / "ds")
        assert set(ds.objects) == {"box", "ball"}
        assert len(ds.records) == 2
        assert len(ds.clouds["box"]) == 64
        for got, want in zip(ds.records, records):
            assert got.object_id == want.object_id
            assert got.hand_class == want.hand_class
            np.testing.assert_allclose(got.pose.to_vector(), want.pose.to_vector(), rtol=1e-12)
            np.testing.assert_allclose(got.rotation.matrix, want.rotation.matrix, atol=1e-9)

    def test_cloud_normals_are_unit(self, tmp_path):
        save_dataset(tmp_path / "ds", {"b": make_box((0.02, 0.02, 0.02))}, [], cloud_points=32)
        ds = load_dataset(tmp_path / "ds")
        norms = np.linalg.norm(ds.clouds["b"].normals, axis=1)
        np.testing.assert_allclose(norms, np.ones(32), atol=1e-12)

    def test_unknown_object_reference_rejected(self, tmp_path):
        with pytest.raises(ValueError, match="unknown object"):
            save_dataset(tmp_path / "ds", {}, [small_record("ghost")])

    def test_hand_name_class_consistency_enforced(self, tmp_path):
        save_dataset(
            tmp_path / "ds", {"box": make_box((0.02, 0.02, 0.02))}, [small_record("box")]
        )
        manifest = tmp_path / "ds" / "manifest.json"
        doc = json.loads(manifest.read_text())
        doc["records"][0]["hand"] = "shadowhand"
        manifest.write_text(json.dumps(doc))
        with pytest.raises(ValueError, match="does not match"):
            load_dataset(tmp_path / "ds")

    def test_record_padding_validated_on_load(self, tmp_path):
        save_dataset(
            tmp_path / "ds", {"box": make_box((0.02, 0.02, 0.02))}, [small_record("box")]
        )
        manifest = tmp_path / "ds" / "manifest.json"
        doc = json.loads(manifest.read_text())
        doc["records"][0]["pose"][10] = 0.4  # ezgripper has 4 dof; slot 10 is padding
        manifest.write_text(json.dumps(doc))
        with pytest.raises(ValueError, match="padded"):
            load_dataset(tmp_path / "ds")

    def test_save_is_deterministic(self, tmp_path):
        objects = {"box": make_box((0.04, 0.05, 0.06))}
        records = [small_record("box")]
        save_dataset(tmp_path / "a", objects, records, cloud_points=32, seed=1)
        save_dataset(tmp_path / "b", objects, records, cloud_points=32, seed=1)
        a = (tmp_path / "a" / "manifest.json").read_bytes()
        b = (tmp_path / "b" / "manifest.json").read_bytes()
        assert a == b
        ca = (tmp_path / "a" / "clouds" / "box.dgd1").read_bytes()
        cb = (tmp_path / "b" / "clouds" / "box.dgd1").read_bytes()
        assert ca == cb
