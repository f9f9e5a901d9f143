"""Projection and motion-plane geometry tests."""

import math

import numpy as np
import pytest

import oracles
from mpa360.geometry import (
    EPS_HORIZON,
    HorizonSingularityError,
    ImageCoord,
    InvalidCoordinateError,
    PlaneCoord,
    PlaneKind,
    ProjectionConfig,
    Side,
    SphereCoord,
    all_motion_planes,
    erp_to_sphere,
    motion_plane,
    perspective_to_sphere,
    reproject,
    sphere_to_erp,
    sphere_to_perspective,
    unreproject,
)


def random_erp_points(rng, cfg, n, pole_margin=1.0):
    u = rng.uniform(0.0, cfg.width, n)
    v = rng.uniform(pole_margin, cfg.height - pole_margin, n)
    return ImageCoord(u, v)


def away_from_horizon(p, plane, cfg, margin=1e-4):
    """Mask of points whose camera-frame polar angle avoids the horizon."""
    s = plane.rotate(erp_to_sphere(p, cfg))
    theta = np.arccos(np.clip(s.z, -1.0, 1.0))
    return np.abs(theta - np.pi / 2) > margin


class TestErpSphere:
    def test_image_center_is_minus_x(self, cfg):
        s = erp_to_sphere(ImageCoord(cfg.width / 2, cfg.height / 2), cfg)
        np.testing.assert_allclose([s.x, s.y, s.z], [-1.0, 0.0, 0.0], atol=1e-12)

    def test_origin_is_north_pole(self, cfg):
        s = erp_to_sphere(ImageCoord(0.0, 0.0), cfg)
        np.testing.assert_allclose([s.x, s.y, s.z], [0.0, 0.0, 1.0], atol=1e-15)

    def test_quarter_point_against_scalar_oracle(self, cfg):
        # phi = pi/2, theta = pi/4 computed independently
        u, v = 0.25 * cfg.width, 0.25 * cfg.height
        s = erp_to_sphere(ImageCoord(u, v), cfg)
        expected = (
            math.sin(math.pi / 4) * math.cos(math.pi / 2),
            math.sin(math.pi / 4) * math.sin(math.pi / 2),
            math.cos(math.pi / 4),
        )
        np.testing.assert_allclose([s.x, s.y, s.z], expected, atol=1e-15)
        back = sphere_to_erp(s, cfg)
        np.testing.assert_allclose([back.u, back.v], [u, v], atol=1e-9)

    def test_pole_tie_break(self, cfg):
        p = sphere_to_erp(SphereCoord(0.0, 0.0, 1.0), cfg)
        assert p.u == 0.0 and p.v == 0.0
        p = sphere_to_erp(SphereCoord(0.0, 0.0, -1.0), cfg)
        assert p.u == 0.0 and p.v == cfg.height

    def test_u_wraps_modulo_width(self, cfg):
        a = erp_to_sphere(ImageCoord(cfg.width + 3.5, 100.0), cfg)
        b = erp_to_sphere(ImageCoord(3.5, 100.0), cfg)
        np.testing.assert_allclose([a.x, a.y, a.z], [b.x, b.y, b.z], atol=1e-12)

    def test_round_trip_bulk(self, cfg, rng):
        p = random_erp_points(rng, cfg, 10_000)
        back = sphere_to_erp(erp_to_sphere(p, cfg), cfg)
        assert np.max(np.abs(back.u - p.u)) < 1e-9
        assert np.max(np.abs(back.v - p.v)) < 1e-9

    def test_unit_norm_everywhere(self, cfg, rng):
        p = ImageCoord(rng.uniform(0, cfg.width, 10_000), rng.uniform(0, cfg.height, 10_000))
        s = erp_to_sphere(p, cfg)
        np.testing.assert_allclose(s.norm(), 1.0, atol=1e-12)

    def test_non_finite_rejected(self, cfg):
        with pytest.raises(InvalidCoordinateError):
            erp_to_sphere(ImageCoord(math.nan, 0.0), cfg)
        with pytest.raises(InvalidCoordinateError):
            sphere_to_erp(SphereCoord(math.inf, 0.0, 0.0), cfg)


class TestPerspective:
    def test_optical_axis_maps_to_origin(self, cfg):
        p = sphere_to_perspective(SphereCoord(0.0, 0.0, 1.0), cfg)
        assert (p.u, p.v) == (0.0, 0.0)
        assert int(p.side) == Side.REAL

    def test_radius_cases(self):
        cfg = ProjectionConfig(512, 256, focal_length=1.0)
        # theta = pi/4 on the real plane
        s = SphereCoord(math.sin(math.pi / 4), 0.0, math.cos(math.pi / 4))
        p = sphere_to_perspective(s, cfg)
        assert abs(p.u - 1.0) < 1e-12 and abs(p.v) < 1e-12
        assert int(p.side) == Side.REAL
        # theta = 3*pi/4 on the virtual plane, same radius
        s = SphereCoord(math.sin(3 * math.pi / 4), 0.0, math.cos(3 * math.pi / 4))
        p = sphere_to_perspective(s, cfg)
        assert abs(p.u - 1.0) < 1e-12 and abs(p.v) < 1e-12
        assert int(p.side) == Side.VIRTUAL

    def test_case_symmetry(self, cfg, rng):
        theta = rng.uniform(0.1, math.pi / 2 - 0.1, 1000)
        phi = rng.uniform(0, 2 * math.pi, 1000)
        upper = sphere_to_perspective(
            SphereCoord(np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)),
            cfg,
        )
        mirrored = sphere_to_perspective(
            SphereCoord(
                np.sin(np.pi - theta) * np.cos(phi),
                np.sin(np.pi - theta) * np.sin(phi),
                np.cos(np.pi - theta),
            ),
            cfg,
        )
        np.testing.assert_allclose(upper.radius(), mirrored.radius(), rtol=1e-12, atol=1e-12)
        assert np.all(upper.side == Side.REAL)
        assert np.all(mirrored.side == Side.VIRTUAL)

    def test_horizon_band_raises(self, cfg):
        theta = math.pi / 2 + 0.5 * EPS_HORIZON
        s = SphereCoord(math.sin(theta), 0.0, math.cos(theta))
        with pytest.raises(HorizonSingularityError):
            sphere_to_perspective(s, cfg)
        # non-strict mode returns finite values instead
        p = sphere_to_perspective(s, cfg, strict=False)
        assert np.isfinite(p.u) and np.isfinite(p.v)

    def test_virtual_unprojects_back(self, cfg):
        local = ProjectionConfig(512, 256, focal_length=1.0)
        s = perspective_to_sphere(PlaneCoord(1.0, 0.0, int(Side.VIRTUAL)), local)
        assert abs(math.acos(float(s.z)) - 3 * math.pi / 4) < 1e-12
        assert abs(float(s.y)) < 1e-12 and float(s.x) > 0

    def test_inverse_pair(self, cfg, rng):
        theta = np.concatenate(
            [rng.uniform(0.0, math.pi / 2 - 0.01, 5000), rng.uniform(math.pi / 2 + 0.01, math.pi, 5000)]
        )
        phi = rng.uniform(0, 2 * math.pi, 10_000)
        s = SphereCoord(np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta))
        back = perspective_to_sphere(sphere_to_perspective(s, cfg), cfg)
        np.testing.assert_allclose([back.x, back.y, back.z], [s.x, s.y, s.z], atol=1e-12)


class TestMotionPlanes:
    def test_rotations_are_proper(self):
        for plane in all_motion_planes():
            r = plane.rotation
            np.testing.assert_allclose(r.T @ r, np.eye(3), atol=1e-12)
            assert abs(np.linalg.det(r) - 1.0) < 1e-12

    def test_left_right_sends_pole_to_lateral_axis(self):
        r = motion_plane(PlaneKind.LEFT_RIGHT).rotation
        np.testing.assert_allclose(r @ np.array([0.0, 0.0, 1.0]), [1.0, 0.0, 0.0], atol=1e-15)

    def test_front_back_watches_image_center(self, cfg):
        r = motion_plane(PlaneKind.FRONT_BACK).rotation
        np.testing.assert_allclose(r @ np.array([-1.0, 0.0, 0.0]), [0.0, 0.0, 1.0], atol=1e-15)

    def test_rotation_preserves_angles(self, rng):
        a = rng.normal(size=3)
        b = rng.normal(size=3)
        a /= np.linalg.norm(a)
        b /= np.linalg.norm(b)
        angle = np.arccos(np.clip(a @ b, -1, 1))
        for plane in all_motion_planes():
            s1 = plane.rotate(SphereCoord(*a))
            s2 = plane.rotate(SphereCoord(*b))
            rotated = np.arccos(
                np.clip(s1.x * s2.x + s1.y * s2.y + s1.z * s2.z, -1, 1)
            )
            assert abs(rotated - angle) < 1e-12
            assert abs(float(s1.norm()) - 1.0) < 1e-12


class TestReproject:
    def test_equator_center_hits_front_back_origin(self, cfg):
        p = reproject(
            ImageCoord(cfg.width / 2, cfg.height / 2), motion_plane(PlaneKind.FRONT_BACK), cfg
        )
        assert abs(p.u) < 1e-9 and abs(p.v) < 1e-9
        assert int(p.side) == Side.REAL

    def test_front_back_origin_unreprojects_to_center(self, cfg):
        p = unreproject(
            PlaneCoord(0.0, 0.0, int(Side.REAL)), motion_plane(PlaneKind.FRONT_BACK), cfg
        )
        assert abs(float(p.u) - cfg.width / 2) < 1e-9
        assert abs(float(p.v) - cfg.height / 2) < 1e-9

    def test_fixed_point_against_chained_oracle(self, cfg):
        plane = motion_plane(PlaneKind.TOP_BOTTOM)
        u, v = 0.3 * cfg.width, 0.6 * cfg.height
        got = reproject(ImageCoord(u, v), plane, cfg)
        exp_u, exp_v, exp_side = oracles.chain_reproject(
            u, v, plane.rotation.tolist(), cfg.width, cfg.height, cfg.focal_length
        )
        assert abs(float(got.u) - exp_u) < 1e-9
        assert abs(float(got.v) - exp_v) < 1e-9
        assert int(got.side) == exp_side
        back = unreproject(got, plane, cfg)
        assert abs(float(back.u) - u) < 1e-6 and abs(float(back.v) - v) < 1e-6

    def test_oracle_agreement_all_planes(self, cfg, rng):
        p = random_erp_points(rng, cfg, 200)
        for plane in all_motion_planes():
            keep = away_from_horizon(p, plane, cfg)
            got = reproject(ImageCoord(p.u[keep], p.v[keep]), plane, cfg, strict=False)
            rot = plane.rotation.tolist()
            for k in range(int(keep.sum())):
                exp_u, exp_v, exp_side = oracles.chain_reproject(
                    p.u[keep][k], p.v[keep][k], rot, cfg.width, cfg.height, cfg.focal_length
                )
                assert abs(got.u[k] - exp_u) < 1e-6
                assert abs(got.v[k] - exp_v) < 1e-6
                assert int(got.side[k]) == exp_side

    def test_round_trip_bulk(self, cfg, rng):
        p = random_erp_points(rng, cfg, 100_000)
        for plane in all_motion_planes():
            keep = away_from_horizon(p, plane, cfg, margin=EPS_HORIZON)
            sub = ImageCoord(p.u[keep], p.v[keep])
            back = unreproject(reproject(sub, plane, cfg, strict=False), plane, cfg)
            du = np.abs(back.u - sub.u)
            du = np.minimum(du, cfg.width - du)  # seam-equivalent coordinates
            assert np.max(du) < 1e-6
            assert np.max(np.abs(back.v - sub.v)) < 1e-6
