"""Closed-form linear stability theory for the circular interface.

Radius ODE, shape-factor ODE, marginal rigidity, steady radii, and the
size-dependent apoptosis schedule that freezes the shape factor.  Serves as
the independent oracle for the nonlinear solver.
"""

from dataclasses import dataclass

import numpy as np

from .special import bessel_i


@dataclass(frozen=True)
class LinearState:
    radius: float
    delta_over_r: float
    mode: int                 # perturbation mode l >= 2
    apoptosis: float
    viscosity_ratio: float
    s_inv: float

    def __post_init__(self):
        if self.radius <= 0.0:
            raise ValueError("radius must be positive")
        if self.mode < 2:
            raise ValueError("perturbation mode must be >= 2")


def radius_rate(radius, apoptosis):
    """dR/dt = I1(R)/I0(R) - A R / 2 for the unperturbed circle."""
    return bessel_i(1, radius) / bessel_i(0, radius) - 0.5 * apoptosis * radius


def _bracket(radius, mode, apoptosis, viscosity_ratio, s_inv):
    """Growth-rate factor multiplying delta/R in the shape-factor ODE.

    The bending term carries the two-phase mode-l mobility factor
    2/(1+lambda) (exact stream-function solution of the jump-driven Stokes
    problem); it reduces to the familiar l S^-1 (l^2-3/2)/(4R^3) form only
    for matched viscosities.
    """
    lam = viscosity_ratio
    l = mode
    i0 = bessel_i(0, radius)
    i1 = bessel_i(1, radius)
    il = bessel_i(l, radius)
    il1 = bessel_i(l + 1, radius)
    return (
        lam / (1.0 + lam) * apoptosis
        - l * s_inv / (2.0 * radius**3) * (l * l - 1.5) / (1.0 + lam)
        + (1.0 - i1 * il1 / (i0 * il)) / (1.0 + lam)
        - 2.0 * i1 / (radius * i0)
    )


def shape_rate(state):
    """d(delta/R)/dt for a slightly perturbed circle."""
    return state.delta_over_r * _bracket(
        state.radius, state.mode, state.apoptosis, state.viscosity_ratio,
        state.s_inv)


def steady_radius(apoptosis, tol=1e-12):
    """Radius at which the circle growth rate vanishes (0.001 <= A < 1)."""
    if not 1e-3 <= apoptosis < 1.0:
        raise ValueError(
            f"no finite steady radius for apoptosis ratio {apoptosis}")
    lo, hi = 1e-8, 1.0
    while radius_rate(hi, apoptosis) > 0.0:
        hi *= 2.0
        if hi > 1e6:
            raise ValueError("steady-radius bracket not found")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if radius_rate(mid, apoptosis) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def marginal_s_inv(mode, apoptosis, radius, viscosity_ratio):
    """Rigidity strength at which the shape-factor growth rate vanishes."""
    lam = viscosity_ratio
    l = mode
    rest = _bracket(radius, mode, apoptosis, lam, 0.0)
    return rest * 2.0 * radius**3 * (1.0 + lam) / (l * (l * l - 1.5))


def self_similar_apoptosis(radius, mode, viscosity_ratio, s_inv):
    """Apoptosis ratio that freezes delta/R at the current radius."""
    lam = viscosity_ratio
    l = mode
    rest = _bracket(radius, mode, 0.0, lam, s_inv)
    return -rest * (1.0 + lam) / lam


def integrate_linear(state, schedule="constant", t_final=1.0, dt=1e-3):
    """Integrate the coupled (R, delta/R) system with classical RK4.

    schedule: "constant" uses state.apoptosis throughout; "self-similar"
    re-solves the apoptosis ratio at every stage so delta/R stays fixed.
    Returns (t, R, delta/R, A) arrays including the initial condition.
    """
    if schedule not in ("constant", "self-similar"):
        raise ValueError(f"unknown apoptosis schedule {schedule!r}")
    n_steps = int(round(t_final / dt))
    l, lam, s_inv = state.mode, state.viscosity_ratio, state.s_inv

    def apoptosis_at(r):
        if schedule == "self-similar":
            return self_similar_apoptosis(r, l, lam, s_inv)
        return state.apoptosis

    def rhs(y):
        r, d = y
        a = apoptosis_at(r)
        return np.array([radius_rate(r, a),
                         d * _bracket(r, l, a, lam, s_inv)]), a

    t = np.empty(n_steps + 1)
    rr = np.empty(n_steps + 1)
    dd = np.empty(n_steps + 1)
    aa = np.empty(n_steps + 1)
    y = np.array([state.radius, state.delta_over_r])
    for i in range(n_steps + 1):
        t[i] = i * dt
        rr[i], dd[i] = y
        k1, a0 = rhs(y)
        aa[i] = a0
        if i == n_steps:
            break
        k2, _ = rhs(y + 0.5 * dt * k1)
        k3, _ = rhs(y + 0.5 * dt * k2)
        k4, _ = rhs(y + dt * k3)
        y = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return t, rr, dd, aa
