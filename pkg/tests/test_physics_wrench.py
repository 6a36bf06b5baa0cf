import numpy as np
import pytest
from hypothesis import given, strategies as st

from graspsynth.physics import (
    AXES_6,
    ContactPoint,
    WrenchTestConfig,
    brute_force_wrench_check,
    cone_edges,
    contact_wrench_columns,
    required_wrench,
    wrench_feasibility,
)


def antipodal_cube_contacts():
    """Two contacts through the centroid of a unit cube, normals +-x."""
    return [
        ContactPoint(position=(0.5, 0.0, 0.0), normal=(1.0, 0.0, 0.0), hand_link=0, gap=0.0),
        ContactPoint(position=(-0.5, 0.0, 0.0), normal=(-1.0, 0.0, 0.0), hand_link=1, gap=0.0),
    ]


def random_contacts(rng, n):
    out = []
    for i in range(n):
        nm = rng.normal(size=3)
        nm /= np.linalg.norm(nm)
        out.append(
            ContactPoint(position=rng.normal(size=3) * 0.05, normal=nm, hand_link=i, gap=0.0)
        )
    return out


class TestConfig:
    def test_defaults_valid(self):
        cfg = WrenchTestConfig()
        assert cfg.acceleration == 0.5
        assert cfg.duration_steps == 60
        assert cfg.displacement_limit == 0.02
        assert cfg.cone_facets == 8

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"acceleration": 0.0},
            {"duration_steps": 0},
            {"displacement_limit": -0.01},
            {"friction_mu": -0.1},
            {"object_mass": 0.0},
            {"cone_facets": 2},
            {"force_cap": 0.0},
            {"balance_tol": 0.0},
            {"contact_threshold": 0.0},
            {"contact_samples": 0},
        ],
    )
    def test_invalid_values_rejected(self, kwargs):
        with pytest.raises(ValueError):
            WrenchTestConfig(**kwargs)

    def test_axes_must_be_signed_unit_axes(self):
        bad = ((1.0, 0.0, 0.0),) * 6
        with pytest.raises(ValueError, match="signed unit axes"):
            WrenchTestConfig(axes=bad)
        # any permutation of the canonical six is fine
        WrenchTestConfig(axes=tuple(reversed(AXES_6)))


class TestConeEdges:
    def test_edge_count_and_unit_norm(self):
        e = cone_edges(np.array([0.0, 1.0, 0.0]), 0.5, 8)
        assert e.shape == (8, 3)
        np.testing.assert_allclose(np.linalg.norm(e, axis=1), 1.0, atol=1e-12)

    def test_zero_friction_collapses_to_pressing_direction(self):
        n = np.array([1.0, 0.0, 0.0])
        e = cone_edges(n, 0.0, 6)
        np.testing.assert_allclose(e, np.tile(-n, (6, 1)), atol=1e-12)

    def test_edge_angle_matches_friction_coefficient(self):
        # tan(angle to -normal) = mu for every edge
        n = np.array([0.0, 0.0, 1.0])
        mu = 0.7
        for e in cone_edges(n, mu, 5):
            along = float(e @ -n)
            tangential = np.linalg.norm(e + along * n)
            assert tangential / along == pytest.approx(mu, abs=1e-12)

    def test_near_axis_normal_uses_fallback_reference(self):
        e = cone_edges(np.array([0.0, 0.0, 1.0]), 0.5, 8)
        assert np.all(np.isfinite(e))
        e = cone_edges(np.array([0.0, 0.0, -1.0]), 0.5, 8)
        assert np.all(np.isfinite(e))

    def test_edges_average_to_cone_axis(self):
        # tangential fan cancels, leaving the pressing direction
        n = np.array([0.6, 0.0, 0.8])
        e = cone_edges(n, 0.4, 8)
        mean = e.mean(axis=0)
        np.testing.assert_allclose(mean / np.linalg.norm(mean), -n, atol=1e-12)


class TestWrenchAssembly:
    def test_column_layout(self):
        cfg = WrenchTestConfig()
        cols = contact_wrench_columns(antipodal_cube_contacts(), cfg)
        assert cols.shape == (6, 2 * cfg.cone_facets)

    def test_torque_about_shifted_centroid(self):
        c = [ContactPoint(position=(1.0, 0.0, 0.0), normal=(0.0, 0.0, 1.0), hand_link=0, gap=0.0)]
        cfg = WrenchTestConfig(friction_mu=0.0, centroid=(1.0, 0.0, 0.0))
        cols = contact_wrench_columns(c, cfg)
        # force acts through the centroid, so no torque
        np.testing.assert_allclose(cols[3:], 0.0, atol=1e-12)

    def test_required_wrench_magnitude(self):
        cfg = WrenchTestConfig()
        w = required_wrench(cfg, (0.0, 1.0, 0.0))
        np.testing.assert_allclose(w, [0.0, 0.05, 0.0, 0.0, 0.0, 0.0], atol=1e-15)

    def test_no_contacts_empty_columns(self):
        assert contact_wrench_columns([], WrenchTestConfig()).shape == (6, 0)


class TestAntipodalCube:
    def test_load_along_normal_line_with_friction(self):
        cfg = WrenchTestConfig()
        assert wrench_feasibility(antipodal_cube_contacts(), cfg, (1.0, 0.0, 0.0))
        assert wrench_feasibility(antipodal_cube_contacts(), cfg, (-1.0, 0.0, 0.0))

    def test_load_along_normal_line_frictionless(self):
        # the cone axis alone carries a push into either contact
        cfg = WrenchTestConfig(friction_mu=0.0)
        assert wrench_feasibility(antipodal_cube_contacts(), cfg, (1.0, 0.0, 0.0))

    def test_tangential_load_frictionless_fails(self):
        cfg = WrenchTestConfig(friction_mu=0.0)
        assert not wrench_feasibility(antipodal_cube_contacts(), cfg, (0.0, 0.0, 1.0))
        assert not wrench_feasibility(antipodal_cube_contacts(), cfg, (0.0, 1.0, 0.0))

    def test_tangential_load_with_friction_passes(self):
        cfg = WrenchTestConfig(friction_mu=0.5)
        for axis in AXES_6:
            assert wrench_feasibility(antipodal_cube_contacts(), cfg, axis)

    def test_brute_force_agrees_on_fixture(self):
        cfg = WrenchTestConfig()
        assert brute_force_wrench_check(
            antipodal_cube_contacts(), cfg, (1.0, 0.0, 0.0), samples=10**4
        )
        cfg0 = WrenchTestConfig(friction_mu=0.0)
        assert not brute_force_wrench_check(
            antipodal_cube_contacts(), cfg0, (0.0, 0.0, 1.0), samples=10**4
        )


class TestFeasibilityEdges:
    def test_zero_contacts_false(self):
        assert wrench_feasibility([], WrenchTestConfig(), (1.0, 0.0, 0.0)) is False
        assert brute_force_wrench_check([], WrenchTestConfig(), (1.0, 0.0, 0.0)) is False

    def test_brute_force_sample_floor(self):
        with pytest.raises(ValueError, match="1e4"):
            brute_force_wrench_check(
                antipodal_cube_contacts(), WrenchTestConfig(), (1.0, 0.0, 0.0), samples=100
            )

    def test_single_contact_cannot_resist_pull(self):
        # pressing forces point into the object; a pull away from the palm
        # along the outward normal finds no supporting edge
        c = [ContactPoint(position=(0.0, 0.0, 0.05), normal=(0.0, 0.0, 1.0), hand_link=0, gap=0.0)]
        cfg = WrenchTestConfig(centroid=(0.0, 0.0, 0.0))
        assert wrench_feasibility(c, cfg, (0.0, 0.0, 1.0)) is False
        assert wrench_feasibility(c, cfg, (0.0, 0.0, -1.0)) is True


class TestInvariants:
    def test_friction_monotonicity(self):
        rng = np.random.default_rng(11)
        mus = [0.0, 0.2, 0.5, 0.9, 1.5]
        for trial in range(8):
            contacts = random_contacts(rng, int(rng.integers(2, 5)))
            axis = np.zeros(3)
            axis[int(rng.integers(3))] = float(rng.choice([-1.0, 1.0]))
            verdicts = [
                wrench_feasibility(contacts, WrenchTestConfig(friction_mu=m), axis) for m in mus
            ]
            # once true, stays true as friction grows
            for lo, hi in zip(verdicts, verdicts[1:]):
                assert not (lo and not hi)

    def test_adding_contact_never_flips_true_to_false(self):
        rng = np.random.default_rng(23)
        cfg = WrenchTestConfig()
        for trial in range(10):
            contacts = random_contacts(rng, int(rng.integers(2, 5)))
            axis = np.zeros(3)
            axis[int(rng.integers(3))] = float(rng.choice([-1.0, 1.0]))
            before = wrench_feasibility(contacts, cfg, axis)
            extra = random_contacts(rng, 1)
            after = wrench_feasibility(contacts + extra, cfg, axis)
            assert not (before and not after)

    def test_mirror_symmetry(self):
        rng = np.random.default_rng(37)
        cfg = WrenchTestConfig()
        for trial in range(8):
            contacts = random_contacts(rng, int(rng.integers(1, 5)))
            axis = np.zeros(3)
            axis[int(rng.integers(3))] = float(rng.choice([-1.0, 1.0]))
            mirrored = [
                ContactPoint(
                    position=-c.position, normal=-c.normal, hand_link=c.hand_link, gap=c.gap
                )
                for c in contacts
            ]
            assert wrench_feasibility(contacts, cfg, axis) == wrench_feasibility(
                mirrored, cfg, tuple(-a for a in axis)
            )

    @given(st.integers(0, 10_000))
    def test_brute_force_true_implies_lp_true(self, seed):
        rng = np.random.default_rng(seed)
        contacts = random_contacts(rng, int(rng.integers(1, 4)))
        cfg = WrenchTestConfig(friction_mu=float(rng.uniform(0.0, 1.0)))
        axis = np.zeros(3)
        axis[int(rng.integers(3))] = float(rng.choice([-1.0, 1.0]))
        if brute_force_wrench_check(contacts, cfg, axis, samples=10**4, seed=seed):
            assert wrench_feasibility(contacts, cfg, axis)
