"""Closed planar curves in tangent-angle / arclength form.

A curve is stored as the 2*pi-periodic part phi(alpha) = theta(alpha) - alpha
of its tangent angle on a uniform grid, together with the (spatially uniform)
arclength metric s_alpha = L/(2*pi) and the position of the alpha=0 marker.
Marker points are equally spaced in arclength; orientation is counterclockwise
with outward normal n = (sin theta, -cos theta).
"""

from dataclasses import dataclass

import numpy as np

from .special import (
    spectral_antiderivative,
    spectral_derivative,
    trig_interp,
)

NEWTON_TOL = 1e-13
NEWTON_MAXIT = 50


class ReparametrizationError(RuntimeError):
    """Equal-arclength Newton iteration failed; input curve is likely
    under-resolved or self-intersecting."""


@dataclass(frozen=True)
class Curve:
    """Equal-arclength representation: phi = theta - alpha, metric, anchor."""

    phi: np.ndarray        # (n,) periodic part of the tangent angle
    s_alpha: float         # L / (2*pi), positive
    ref_point: tuple       # position of the alpha = 0 marker

    @property
    def n(self):
        return self.phi.size

    @property
    def length(self):
        return 2.0 * np.pi * self.s_alpha

    @property
    def alphas(self):
        return 2.0 * np.pi * np.arange(self.n) / self.n

    def theta(self):
        return self.alphas + self.phi

    def tangents(self):
        th = self.theta()
        return np.column_stack([np.cos(th), np.sin(th)])

    def normals(self):
        th = self.theta()
        return np.column_stack([np.sin(th), -np.cos(th)])


@dataclass(frozen=True)
class MarkerCurve:
    """Marker points equally spaced in arclength, shape (n, 2)."""

    points: np.ndarray

    @property
    def n(self):
        return self.points.shape[0]


def _check_power_of_two(n):
    if n < 8 or (n & (n - 1)) != 0:
        raise ValueError(f"point count must be a power of two >= 8, got {n}")


def reconstruct(curve):
    """Markers from (phi, s_alpha, ref_point) by the mean-subtracted Fourier
    antiderivative of (cos theta, sin theta) anchored at the alpha=0 marker."""
    th = curve.theta()
    ct, st = np.cos(th), np.sin(th)
    px = spectral_antiderivative(ct)
    py = spectral_antiderivative(st)
    x = curve.ref_point[0] + curve.s_alpha * (px - px[0])
    y = curve.ref_point[1] + curve.s_alpha * (py - py[0])
    return MarkerCurve(points=np.column_stack([x, y]))


def from_markers(points):
    """Build an equal-arclength Curve from an arbitrary closed marker sequence.

    Solves the cumulative-arclength equation s(beta_j) = j*L/N for the
    reparametrization nodes by Newton iteration with Fourier interpolation,
    then extracts the tangent angle on the new grid.  Input orientation is
    reversed if the signed area is negative.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must have shape (n, 2)")
    n = pts.shape[0]
    _check_power_of_two(n)

    if _signed_area(pts) < 0.0:
        pts = np.vstack([pts[:1], pts[1:][::-1]])

    x, y = pts[:, 0], pts[:, 1]
    xb = spectral_derivative(x)
    yb = spectral_derivative(y)
    speed = np.hypot(xb, yb)
    if np.any(speed <= 0.0):
        raise ReparametrizationError("degenerate parametrization (zero speed)")

    mean_speed = speed.mean()
    total_len = 2.0 * np.pi * mean_speed
    p_anti = spectral_antiderivative(speed)

    def arclen(beta):
        return mean_speed * beta + trig_interp(p_anti, beta) - p_anti[0]

    targets = total_len * np.arange(n) / n
    beta = 2.0 * np.pi * np.arange(n) / n
    resid = arclen(beta) - targets
    if np.max(np.abs(resid)) <= NEWTON_TOL * total_len:
        xn, yn = x, y  # already equal-arclength; projection is exact
    else:
        for _ in range(NEWTON_MAXIT):
            beta = beta - resid / trig_interp(speed, beta)
            resid = arclen(beta) - targets
            if np.max(np.abs(resid)) <= NEWTON_TOL * total_len:
                break
        else:
            raise ReparametrizationError(
                f"equal-arclength Newton stalled at residual "
                f"{np.max(np.abs(resid)):.3e}"
            )
        xn = trig_interp(x, beta)
        yn = trig_interp(y, beta)
        # alpha = 0 stays anchored at the first input marker
        xn[0], yn[0] = x[0], y[0]

    xa = spectral_derivative(xn)
    ya = spectral_derivative(yn)
    theta = np.unwrap(np.arctan2(ya, xa))
    alphas = 2.0 * np.pi * np.arange(n) / n
    phi = theta - alphas
    s_alpha = float(np.hypot(xa, ya).mean())
    return Curve(phi=phi, s_alpha=s_alpha, ref_point=(float(xn[0]), float(yn[0])))


def _signed_area(pts):
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def curvature(curve):
    """kappa(alpha_j) = (1 + phi_alpha) / s_alpha via spectral derivative."""
    return (1.0 + spectral_derivative(curve.phi)) / curve.s_alpha


def geometry_stats(markers):
    """(area, effective_radius, centroid) by spectral shoelace quadrature."""
    pts = markers.points
    x, y = pts[:, 0], pts[:, 1]
    xa = spectral_derivative(x)
    ya = spectral_derivative(y)
    w = 2.0 * np.pi / pts.shape[0]
    area = 0.5 * w * float(np.sum(x * ya - y * xa))
    if area <= 0.0:
        raise ValueError(f"non-positive enclosed area ({area:.3e}); "
                         "check orientation or self-intersection")
    cx = 0.5 * w * float(np.sum(x * x * ya)) / area
    cy = -0.5 * w * float(np.sum(y * y * xa)) / area
    r_eff = float(np.sqrt(area / np.pi))
    return area, r_eff, (cx, cy)


def shape_factor(markers):
    """Maximum relative radial deviation from the equal-area circle.

    Computed about the area centroid, so the diagnostic is invariant under
    rigid motions; returns 0 for any sampling of a centered circle.
    """
    _, r_eff, (cx, cy) = geometry_stats(markers)
    rel = np.hypot(markers.points[:, 0] - cx, markers.points[:, 1] - cy) / r_eff
    return max(float(rel.max()) - 1.0, 0.0)


def circle(radius, n, center=(0.0, 0.0)):
    """Exact equal-arclength circle: phi = pi/2, s_alpha = R."""
    phi = np.full(n, 0.5 * np.pi)
    return Curve(phi=phi, s_alpha=float(radius),
                 ref_point=(center[0] + radius, center[1]))


def perturbed_circle(radius, modes, n):
    """Curve for r(alpha) = radius + sum of (l, amplitude, kind) harmonics.

    `modes` is an iterable of (l, amplitude, kind) with kind 'cos' or 'sin';
    sampling is uniform in polar angle, then reparametrized to equal
    arclength.
    """
    a = 2.0 * np.pi * np.arange(n) / n
    r = np.full(n, float(radius))
    for l, amp, kind in modes:
        if kind == "cos":
            r += amp * np.cos(l * a)
        elif kind == "sin":
            r += amp * np.sin(l * a)
        else:
            raise ValueError(f"unknown harmonic kind {kind!r}")
    pts = np.column_stack([r * np.cos(a), r * np.sin(a)])
    return from_markers(pts)
