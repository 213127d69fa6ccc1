"""Quasi-steady nutrient field inside the interface.

Solves (Laplacian - 1) sigma = 0 in the enclosed region with sigma = 1 on the
boundary, written as a double-layer potential with density zeta.  The jump
relation in this kernel orientation puts +1/2 on the diagonal (validated
against the closed-form radial solution and frozen in the regression tests).
"""

from dataclasses import dataclass

import numpy as np

from .curve import curvature
from .gmres import gmres
from .quadrature import (
    CurvePairwise,
    helmholtz_double_split,
    helmholtz_single_split,
    nystrom_matrix,
)
from .special import bessel_k, spectral_derivative

JUMP_COEFF = 0.5


class InteriorEvalError(ValueError):
    """Evaluation point is too close to the interface for plain quadrature."""


@dataclass
class NutrientTrace:
    """Layer density and boundary data derived from the nutrient solve."""

    zeta: np.ndarray         # double-layer density
    sigma_n: np.ndarray      # n . grad sigma on the interface
    sigma_n_s: np.ndarray    # arclength derivative of sigma_n
    hess_tangent: np.ndarray  # s . (grad grad sigma n) = sigma_n_s
    hess_normal: np.ndarray   # n . (grad grad sigma n) = 1 - kappa sigma_n


def solve_density(pw, tol=1e-12, restart=200, maxit=500):
    """Density zeta of the second-kind system (1/2 + D)[zeta] = 1."""
    system = nystrom_matrix(pw, helmholtz_double_split(pw))
    system[np.diag_indices(pw.n)] += JUMP_COEFF
    zeta, report = gmres(system, np.ones(pw.n), tol=tol, restart=restart,
                         maxit=maxit)
    if not report.converged:
        raise RuntimeError(
            f"nutrient GMRES did not converge: residual {report.residual:.3e} "
            f"after {report.iterations} iterations"
        )
    return zeta, report


def normal_derivative(pw, zeta):
    """n . grad sigma on the interface from the layer density.

    Uses the identity d sigma/dn = (d/ds) S[zeta_s] - n . S[n zeta] with the
    single-layer operator S of the same Green's function.
    """
    s_mat = nystrom_matrix(pw, helmholtz_single_split(pw))
    s_alpha = pw.s_alpha
    zeta_s = spectral_derivative(zeta) / s_alpha
    term1 = spectral_derivative(s_mat @ zeta_s) / s_alpha
    nx, ny = pw.normals[:, 0], pw.normals[:, 1]
    term2 = nx * (s_mat @ (nx * zeta)) + ny * (s_mat @ (ny * zeta))
    return term1 - term2


def hessian_normal_data(curve, sigma_n):
    """(s . (grad grad sigma n), n . (grad grad sigma n)) on the interface."""
    hess_tangent = spectral_derivative(sigma_n) / curve.s_alpha
    hess_normal = 1.0 - curvature(curve) * sigma_n
    return hess_tangent, hess_normal


def solve_trace(pw, tol=1e-12, restart=200, maxit=500):
    """Full nutrient boundary data for one curve.  Returns (trace, report)."""
    zeta, report = solve_density(pw, tol=tol, restart=restart, maxit=maxit)
    sigma_n = normal_derivative(pw, zeta)
    hess_tangent, hess_normal = hessian_normal_data(pw.curve, sigma_n)
    trace = NutrientTrace(zeta=zeta, sigma_n=sigma_n, sigma_n_s=hess_tangent,
                          hess_tangent=hess_tangent, hess_normal=hess_normal)
    return trace, report


def evaluate_interior(curve, zeta, point, pw=None):
    """sigma at a point strictly inside the interface (plain trapezoid).

    Accuracy degrades within a few grid spacings of the boundary; points
    closer than five spacings are rejected.
    """
    pw = pw if pw is not None else CurvePairwise(curve)
    px, py = float(point[0]), float(point[1])
    dx = pw.x - px
    dy = pw.y - py
    r = np.hypot(dx, dy)
    spacing = 2.0 * np.pi * pw.s_alpha / pw.n
    if r.min() <= 5.0 * spacing:
        raise InteriorEvalError(
            f"point {point} is within 5 grid spacings of the interface"
        )
    nx, ny = pw.normals[:, 0], pw.normals[:, 1]
    kernel = bessel_k(1, r) * (dx * nx + dy * ny) / (2.0 * np.pi * r)
    return float(kernel @ zeta * pw.s_alpha * pw.trap_w)
