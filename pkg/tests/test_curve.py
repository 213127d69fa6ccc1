"""Curve representation: reparametrization, reconstruction, diagnostics."""

import numpy as np
import pytest

from tumorbim.curve import (
    ReparametrizationError,
    circle,
    curvature,
    from_markers,
    geometry_stats,
    perturbed_circle,
    reconstruct,
    shape_factor,
)
from tumorbim.special import spectral_derivative


def polar_markers(radius_fn, n):
    a = 2.0 * np.pi * np.arange(n) / n
    r = radius_fn(a)
    return np.column_stack([r * np.cos(a), r * np.sin(a)])


def arc_spacings(points):
    """Arclength between consecutive markers, from the spectral speed."""
    from tumorbim.special import spectral_antiderivative
    n = points.shape[0]
    speed = np.hypot(spectral_derivative(points[:, 0]),
                     spectral_derivative(points[:, 1]))
    p = spectral_antiderivative(speed)
    h = 2.0 * np.pi / n
    return speed.mean() * h + np.diff(np.concatenate([p, p[:1]]))


class TestFromMarkers:
    def test_circle_from_polar_sampling(self):
        c = from_markers(polar_markers(lambda a: 2.0 + 0 * a, 128))
        assert np.abs(c.phi - 0.5 * np.pi).max() < 1e-12
        assert c.s_alpha == pytest.approx(2.0, rel=1e-12)
        assert c.ref_point == pytest.approx((2.0, 0.0), abs=1e-12)

    def test_three_mode_equal_arclength(self):
        c = from_markers(polar_markers(
            lambda a: 1.988 + 0.05 * np.cos(3 * a), 256))
        sp = arc_spacings(reconstruct(c).points)
        assert np.abs(sp - sp.mean()).max() / sp.mean() < 1e-8

    def test_ellipse_against_dense_inversion(self):
        # oracle: invert the cumulative arclength on a 16x refined sampling
        n = 128
        pts = np.column_stack([2.0 * np.cos(2 * np.pi * np.arange(n) / n),
                               1.0 * np.sin(2 * np.pi * np.arange(n) / n)])
        c = from_markers(pts)
        got = reconstruct(c).points

        m = 16 * n
        b = 2.0 * np.pi * np.arange(m) / m
        dense = np.column_stack([2.0 * np.cos(b), np.sin(b)])
        seg = np.hypot(*np.diff(np.vstack([dense, dense[:1]]), axis=0).T)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        total = cum[-1]
        targets = total * np.arange(n) / n
        idx = np.searchsorted(cum, targets, side="right") - 1
        frac = (targets - cum[idx]) / seg[idx]
        closed = np.vstack([dense, dense[:1]])
        oracle = closed[idx] + frac[:, None] * (closed[idx + 1] - closed[idx])
        assert np.abs(got - oracle).max() < 1e-4  # oracle is piecewise linear
        sp = arc_spacings(got)
        assert np.abs(sp - sp.mean()).max() / sp.mean() < 1e-10

    def test_orientation_repair(self):
        pts = polar_markers(lambda a: 2.0 + 0 * a, 64)[::-1]
        pts = np.roll(pts, 1, axis=0)  # keep the first marker first
        c = from_markers(pts)
        area, _, _ = geometry_stats(reconstruct(c))
        assert area > 0

    def test_projection_idempotent(self):
        c1 = from_markers(polar_markers(
            lambda a: 2.0 + 0.1 * np.cos(2 * a) + 0.05 * np.sin(5 * a), 128))
        c2 = from_markers(reconstruct(c1).points)
        assert np.abs(c1.phi - c2.phi).max() < 1e-12
        assert c1.s_alpha == pytest.approx(c2.s_alpha, rel=1e-12)

    def test_roundtrip_identity(self):
        c1 = perturbed_circle(1.988, [(3, 0.05, "cos")], 128)
        m1 = reconstruct(c1)
        c2 = from_markers(m1.points)
        m2 = reconstruct(c2)
        scale = c1.length
        assert np.abs(m1.points - m2.points).max() < 1e-10 * scale

    def test_rejects_degenerate_input(self):
        pts = np.tile([1.0, 0.0], (64, 1))  # zero-speed parametrization
        with pytest.raises(ReparametrizationError):
            from_markers(pts)

    def test_power_of_two_required(self):
        with pytest.raises(ValueError):
            from_markers(polar_markers(lambda a: 1.0 + 0 * a, 48))


class TestReconstruct:
    def test_circle_layout(self):
        c = circle(3.0, 64)
        pts = reconstruct(c).points
        a = c.alphas
        expected = 3.0 * np.column_stack([np.cos(a), np.sin(a)])
        assert np.abs(pts - expected).max() < 1e-12

    def test_closure(self):
        c = perturbed_circle(2.0, [(3, 0.1, "cos"), (5, 0.05, "sin")], 128)
        pts = reconstruct(c).points
        th = c.theta()
        # residual of the closed-curve compatibility integrals
        assert abs(np.cos(th).mean()) * c.length < 1e-10 * c.length
        gap = np.hypot(*(pts[0] - pts[-1]))
        step = c.length / c.n
        assert gap < 1.5 * step  # consecutive points, curve closed

    def test_perturbed_circle_matches_analytic(self):
        n = 256
        c = perturbed_circle(2.0, [(3, 0.05, "cos")], n)
        pts = reconstruct(c).points
        pol = np.arctan2(pts[:, 1], pts[:, 0])
        r_expected = 2.0 + 0.05 * np.cos(3 * pol)
        assert np.abs(np.hypot(pts[:, 0], pts[:, 1]) - r_expected).max() < 1e-8


class TestCurvature:
    def test_circle(self):
        c = circle(2.5, 64)
        assert np.abs(curvature(c) - 1.0 / 2.5).max() < 1e-12

    def test_polar_two_mode(self):
        n = 256
        c = perturbed_circle(2.0, [(2, 0.05, "cos")], n)
        pts = reconstruct(c).points
        pol = np.arctan2(pts[:, 1], pts[:, 0])
        r = 2.0 + 0.05 * np.cos(2 * pol)
        rp = -0.10 * np.sin(2 * pol)
        rpp = -0.20 * np.cos(2 * pol)
        expected = (r * r + 2 * rp * rp - r * rpp) / (r * r + rp * rp) ** 1.5
        assert np.abs(curvature(c) - expected).max() < 1e-8

    def test_total_turning(self):
        for modes in ([(3, 0.05, "cos")], [(2, 0.2, "cos"), (5, 0.1, "sin")]):
            c = perturbed_circle(2.0, modes, 128)
            total = (curvature(c) * c.s_alpha).sum() * 2.0 * np.pi / c.n
            assert total == pytest.approx(2.0 * np.pi, abs=1e-12)


class TestGeometryStats:
    def test_circle(self):
        area, r_eff, centroid = geometry_stats(reconstruct(circle(2.0, 64)))
        assert area == pytest.approx(4.0 * np.pi, rel=1e-12)
        assert r_eff == pytest.approx(2.0, rel=1e-12)
        assert centroid == pytest.approx((0.0, 0.0), abs=1e-12)

    def test_perturbed_area(self):
        c = perturbed_circle(1.988, [(3, 0.05, "cos")], 256)
        area, _, _ = geometry_stats(reconstruct(c))
        assert area == pytest.approx(np.pi * (1.988**2 + 0.05**2 / 2),
                                     rel=1e-10)

    def test_translated_circle_centroid(self):
        c = circle(1.5, 64, center=(0.7, -0.3))
        _, _, centroid = geometry_stats(reconstruct(c))
        assert centroid == pytest.approx((0.7, -0.3), abs=1e-12)

    def test_negative_area_rejected(self):
        pts = polar_markers(lambda a: 1.0 + 0 * a, 32)[::-1]
        from tumorbim.curve import MarkerCurve
        with pytest.raises(ValueError):
            geometry_stats(MarkerCurve(points=pts))


class TestShapeFactor:
    def test_circle_zero(self):
        assert shape_factor(reconstruct(circle(2.0, 64))) < 1e-12

    def test_translated_circle_zero(self):
        assert shape_factor(
            reconstruct(circle(2.0, 64, center=(3.0, 1.0)))) < 1e-12

    def test_linearization(self):
        c = perturbed_circle(1.988, [(3, 0.05, "cos")], 256)
        sf = shape_factor(reconstruct(c))
        eps = 0.05 / 1.988
        assert abs(sf - eps) < 2.0 * eps**2

    def test_rigid_motion_invariance(self):
        c = perturbed_circle(2.0, [(3, 0.1, "cos")], 128)
        pts = reconstruct(c).points
        base = shape_factor(reconstruct(c))
        ang = 0.83
        rot = np.array([[np.cos(ang), -np.sin(ang)],
                        [np.sin(ang), np.cos(ang)]])
        moved = pts @ rot.T + np.array([1.3, -2.1])
        from tumorbim.curve import MarkerCurve
        assert shape_factor(MarkerCurve(points=moved)) == pytest.approx(
            base, abs=1e-10)
