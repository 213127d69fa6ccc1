"""Spectral boundary-integral simulation of an elastic tumor-host interface.

A sharp-interface solver for a two-phase Stokes tumor model: a modified
Helmholtz equation supplies the nutrient field, layer potentials supply the
flow driven by membrane bending forces (optionally curvature-weakened), and a
non-stiff tangent-angle/arclength scheme advances the interface.
"""

from .bending import BendingModel, bending_force, nu_and_derivatives
from .curve import (
    Curve,
    MarkerCurve,
    circle,
    curvature,
    from_markers,
    geometry_stats,
    perturbed_circle,
    reconstruct,
    shape_factor,
)
from .gmres import SolveReport, gmres
from .nutrient import NutrientTrace, evaluate_interior, solve_trace
from .stability import (
    LinearState,
    integrate_linear,
    marginal_s_inv,
    radius_rate,
    self_similar_apoptosis,
    shape_rate,
    steady_radius,
)
from .stepper import StepperSettings, StepperState, bootstrap, run, step
from .stokes import InterfaceFieldSolver, PhysParams, StokesTrace

__version__ = "0.1.0"

__all__ = [
    "BendingModel", "bending_force", "nu_and_derivatives",
    "Curve", "MarkerCurve", "circle", "curvature", "from_markers",
    "geometry_stats", "perturbed_circle", "reconstruct", "shape_factor",
    "SolveReport", "gmres",
    "NutrientTrace", "evaluate_interior", "solve_trace",
    "LinearState", "integrate_linear", "marginal_s_inv", "radius_rate",
    "self_similar_apoptosis", "shape_rate", "steady_radius",
    "StepperSettings", "StepperState", "bootstrap", "run", "step",
    "InterfaceFieldSolver", "PhysParams", "StokesTrace",
]
