"""Interfacial Stokes problem: stress jump, slip, force term, velocity solve.

The exterior velocity on the interface satisfies the second-kind system
    v - 2 (lambda-1)/(lambda+1) D[v] = F / (lambda + 1),
with F assembled from the stress jump (single layer) and the interior/exterior
slip (double layer plus identity).  For matched viscosities the double-layer
coefficient vanishes and v = F/2 directly.
"""

from dataclasses import dataclass

import numpy as np

from .bending import bending_force
from .gmres import gmres
from .nutrient import solve_trace
from .quadrature import CurvePairwise, StokesOperators


@dataclass(frozen=True)
class PhysParams:
    """Nondimensional physics: apoptosis-to-mitosis ratio and viscosity ratio."""

    apoptosis: float
    viscosity_ratio: float

    def __post_init__(self):
        if self.apoptosis < 0.0:
            raise ValueError("apoptosis ratio must be nonnegative")
        if self.viscosity_ratio <= 0.0:
            raise ValueError("viscosity ratio must be positive")


@dataclass
class StokesTrace:
    jump: np.ndarray      # (n, 2) stress jump across the membrane
    slip: np.ndarray      # (n, 2) exterior-minus-interior velocity
    force: np.ndarray     # (n, 2) force term of the integral equation
    v2: np.ndarray        # (n, 2) exterior velocity on the interface
    v_normal: np.ndarray  # (n,) normal velocity v2 . n


@dataclass
class FieldSolution:
    """Everything one interface position yields: nutrient + Stokes data."""

    stokes: StokesTrace
    nutrient: object
    kappa: np.ndarray
    nutrient_iterations: int
    stokes_iterations: int


def stress_jump(curve, nutrient, model, filter_strength=10.0, filter_order=25):
    """(T2 - T1^u) n on the grid.

    Normal part: -S^{-1} f(kappa) + 2 n.(grad grad sigma n) - 2 sigma, with
    sigma = 1 on the interface; tangential part: 2 s.(grad grad sigma n).
    The dimension-dependent term vanishes identically in 2D.
    """
    f = bending_force(curve, model, filter_strength=filter_strength,
                      filter_order=filter_order)
    normal_mag = -model.s_inv * f + 2.0 * nutrient.hess_normal - 2.0
    tangent_mag = 2.0 * nutrient.hess_tangent
    return (normal_mag[:, None] * curve.normals()
            + tangent_mag[:, None] * curve.tangents())


def slip_velocity(pw, nutrient, params):
    """v2 - u1 on the interface: sigma_n n - (A/2) x.

    The tangential part of grad sigma vanishes because sigma is constant on
    the interface.
    """
    half_a = 0.5 * params.apoptosis
    slip = nutrient.sigma_n[:, None] * pw.normals
    slip[:, 0] -= half_a * pw.x
    slip[:, 1] -= half_a * pw.y
    return slip


def force_term(ops, jump, slip):
    """F = -2 S[jump] + 2 D[slip] + slip."""
    return -2.0 * ops.single_layer(jump) + 2.0 * ops.double_layer(slip) + slip


def solve_velocity(ops, force, params, tol=1e-11, restart=200, maxit=500):
    """Exterior interface velocity and its normal component.

    Returns (v2, v_normal, iterations).  With viscosity ratio 1 the
    double-layer term drops and no iterations are needed.
    """
    lam = params.viscosity_ratio
    n = ops.pw.n
    if lam == 1.0:
        v2 = 0.5 * force
        iterations = 0
    else:
        coeff = 2.0 * (lam - 1.0) / (lam + 1.0)
        system = ops.system_matrix(coeff)
        rhs = np.concatenate([force[:, 0], force[:, 1]]) / (lam + 1.0)
        sol, report = gmres(system, rhs, tol=tol, restart=restart, maxit=maxit)
        if not report.converged:
            raise RuntimeError(
                f"Stokes GMRES stagnated: residual {report.residual:.3e} "
                f"after {report.iterations} iterations"
            )
        v2 = np.column_stack([sol[:n], sol[n:]])
        iterations = report.iterations
    v_normal = np.einsum("ij,ij->i", v2, ops.pw.normals)
    return v2, v_normal, iterations


class InterfaceFieldSolver:
    """Callable bundling the nutrient and Stokes solves for the time stepper."""

    def __init__(self, params, bending_model, gmres_tol_nutrient=1e-12,
                 gmres_tol_stokes=1e-11, gmres_restart=200, gmres_maxit=500,
                 filter_strength=10.0, filter_order=25):
        self.params = params
        self.bending_model = bending_model
        self.gmres_tol_nutrient = gmres_tol_nutrient
        self.gmres_tol_stokes = gmres_tol_stokes
        self.gmres_restart = gmres_restart
        self.gmres_maxit = gmres_maxit
        self.filter_strength = filter_strength
        self.filter_order = filter_order

    def __call__(self, curve, apoptosis=None):
        params = self.params
        if apoptosis is not None:
            params = PhysParams(apoptosis=apoptosis,
                                viscosity_ratio=params.viscosity_ratio)
        pw = CurvePairwise(curve)
        nutrient, nut_report = solve_trace(
            pw, tol=self.gmres_tol_nutrient, restart=self.gmres_restart,
            maxit=self.gmres_maxit)
        jump = stress_jump(curve, nutrient, self.bending_model,
                           filter_strength=self.filter_strength,
                           filter_order=self.filter_order)
        slip = slip_velocity(pw, nutrient, params)
        ops = StokesOperators(pw)
        force = force_term(ops, jump, slip)
        v2, v_normal, stokes_iters = solve_velocity(
            ops, force, params, tol=self.gmres_tol_stokes,
            restart=self.gmres_restart, maxit=self.gmres_maxit)
        trace = StokesTrace(jump=jump, slip=slip, force=force, v2=v2,
                            v_normal=v_normal)
        return FieldSolution(stokes=trace, nutrient=nutrient, kappa=pw.kappa,
                             nutrient_iterations=nut_report.iterations,
                             stokes_iterations=stokes_iters)
