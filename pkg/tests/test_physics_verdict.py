import numpy as np
import pytest

from graspsynth.geometry import make_icosphere
from graspsynth.hands import HandPose, load_roster_hand, zero_pose
from graspsynth.physics import (
    PhysicsVerdict,
    WrenchTestConfig,
    displacement_test,
    read_verdicts_jsonl,
    verdict_record,
    write_verdicts_jsonl,
)
from synth_hands import four_pad_hand, slab_object, two_pad_hand


class TestVerdictType:
    def test_passed_must_match_conjunction(self):
        pose = HandPose(np.zeros(3), np.zeros(24))
        with pytest.raises(ValueError, match="conjunction"):
            PhysicsVerdict(
                passed=True,
                per_axis=(True, True, True, False, True, True),
                max_penetration=0.0,
                refined_pose=pose,
            )

    def test_per_axis_length_checked(self):
        pose = HandPose(np.zeros(3), np.zeros(24))
        with pytest.raises(ValueError, match="six"):
            PhysicsVerdict(passed=True, per_axis=(True,), max_penetration=0.0, refined_pose=pose)

    def test_negative_penetration_rejected(self):
        pose = HandPose(np.zeros(3), np.zeros(24))
        with pytest.raises(ValueError, match="nonnegative"):
            PhysicsVerdict(
                passed=False, per_axis=(False,) * 6, max_penetration=-0.01, refined_pose=pose
            )


class TestDisplacementTest:
    def test_no_contact_grasp_fails_cleanly(self):
        hand = load_roster_hand("ezgripper")
        sphere = make_icosphere(0.04, 2)
        v = displacement_test(sphere, hand, zero_pose(hand, translation=(1.0, 0.0, 0.0)), WrenchTestConfig())
        assert v.passed is False
        assert v.per_axis == (False,) * 6
        assert v.max_penetration == 0.0

    def test_enveloping_four_pad_grasp_passes(self):
        spec, pose = four_pad_hand(0.04, 0.002)
        sphere = make_icosphere(0.04, 2)
        v = displacement_test(sphere, spec, pose, WrenchTestConfig())
        assert v.per_axis == (True,) * 6
        assert v.passed is True

    def test_pad_inside_object_reports_penetration(self):
        spec, pose = two_pad_hand(-0.003)
        v = displacement_test(slab_object(), spec, pose, WrenchTestConfig())
        assert v.max_penetration >= 0.003 - 1e-9
        assert v.max_penetration <= 0.004

    def test_passed_always_equals_conjunction(self):
        hand = load_roster_hand("barrett")
        sphere = make_icosphere(0.05, 2)
        for seed, t in [(0, (0.0, 0.0, 0.08)), (1, (0.0, 0.02, 0.07)), (2, (0.4, 0.0, 0.0))]:
            from graspsynth.hands import uniform_random_pose

            pose = uniform_random_pose(hand, seed=seed, translation=t)
            v = displacement_test(sphere, hand, pose, WrenchTestConfig())
            assert v.passed == all(v.per_axis)

    def test_refined_pose_is_returned(self):
        spec, pose = two_pad_hand(0.02)
        v = displacement_test(slab_object(), spec, pose, WrenchTestConfig())
        assert v.refined_pose.to_vector().shape == (27,)

    def test_deterministic(self):
        spec, pose = four_pad_hand(0.04, 0.002)
        sphere = make_icosphere(0.04, 2)
        a = displacement_test(sphere, spec, pose, WrenchTestConfig(), seed=5)
        b = displacement_test(sphere, spec, pose, WrenchTestConfig(), seed=5)
        assert a.per_axis == b.per_axis
        assert a.max_penetration == b.max_penetration
        np.testing.assert_array_equal(a.refined_pose.to_vector(), b.refined_pose.to_vector())


class TestJsonlExport:
    def make_verdict(self):
        pose = HandPose(np.array([0.01, -0.02, 0.09]), np.zeros(24))
        return PhysicsVerdict(
            passed=False,
            per_axis=(True, False, True, True, True, True),
            max_penetration=0.0015,
            refined_pose=pose,
        )

    def test_record_fields(self):
        rec = verdict_record("cand-7", self.make_verdict())
        assert rec["candidate_id"] == "cand-7"
        assert rec["passed"] is False
        assert rec["per_axis"] == [True, False, True, True, True, True]
        assert rec["max_penetration_m"] == 0.0015
        assert len(rec["refined_pose"]) == 27

    def test_roundtrip(self, tmp_path):
        path = tmp_path / "verdicts.jsonl"
        v = self.make_verdict()
        write_verdicts_jsonl(path, [("a", v), ("b", v)])
        rows = read_verdicts_jsonl(path)
        assert [r["candidate_id"] for r in rows] == ["a", "b"]
        assert rows[0]["refined_pose"][2] == 0.09

    def test_byte_deterministic(self, tmp_path):
        v = self.make_verdict()
        p1 = tmp_path / "one.jsonl"
        p2 = tmp_path / "two.jsonl"
        write_verdicts_jsonl(p1, [("x", v)])
        write_verdicts_jsonl(p2, [("x", v)])
        assert p1.read_bytes() == p2.read_bytes()

    def test_empty_list_writes_empty_file(self, tmp_path):
        path = tmp_path / "none.jsonl"
        write_verdicts_jsonl(path, [])
        assert path.read_bytes() == b""
        assert read_verdicts_jsonl(path) == []
