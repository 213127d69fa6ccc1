"""Interface evolution in tangent-angle / arclength variables.

The stiff curvature-driven part of the tangent-angle equation is isolated as
the Fourier symbol -(|k|/s_alpha)^3 and integrated exactly via integrating
factors; the remainder advances with second-order Adams-Bashforth.  The
tangential velocity is the unique choice keeping markers equally spaced in
arclength, so the metric s_alpha stays a single scalar.
"""

import os
from dataclasses import dataclass, replace

import numpy as np

from .curve import (
    Curve,
    curvature,
    from_markers,
    geometry_stats,
    reconstruct,
    shape_factor,
)
from .output import write_csv_atomic
from .special import (
    fourier_filter,
    fourier_modes,
    krasny_filter,
    spectral_antiderivative,
    spectral_derivative,
)
from .stability import self_similar_apoptosis


class BlowUpError(RuntimeError):
    """Arclength metric lost positivity: blow-up or under-resolution."""


@dataclass(frozen=True)
class StepperSettings:
    filter_strength: float = 10.0
    filter_order: int = 25
    krasny_threshold: float = 1e-13
    ssd_prefactor: float = 1.0
    reproject_interval: int = 50


@dataclass
class StepperState:
    """Two-step history needed by the multistep integrator."""

    curve: Curve
    theta_hat: np.ndarray          # spectrum of phi at t_n
    n_hat_prev: np.ndarray         # spectrum of the explicit term at t_{n-1}
    s_alpha_prev: float            # metric at t_{n-1}
    m_prev: float                  # mean stretching rate at t_{n-1}
    ref_velocity_prev: np.ndarray  # V(0) n(0) at t_{n-1}
    t: float
    dt: float
    step_index: int


def tangential_velocity(v_normal, theta_alpha):
    """Tangential velocity enforcing equal-arclength markers; T(0) = 0."""
    g = np.asarray(theta_alpha) * np.asarray(v_normal)
    p = spectral_antiderivative(g)
    return p[0] - p


def arclength_rate(v_normal, theta_alpha):
    """M = mean of V theta_alpha: the uniform stretching rate of s_alpha."""
    return float(np.mean(np.asarray(v_normal) * np.asarray(theta_alpha)))


def nonlinear_spectrum(curve, theta_hat, v_normal, t_tangential,
                       ssd_prefactor=1.0):
    """Spectrum of the non-stiff remainder of the tangent-angle equation.

    N = (theta_alpha T - V_alpha)/s_alpha minus the dominant Hilbert term,
    which in Fourier space is the exact symbol -(|k|/s_alpha)^3.
    """
    s_alpha = curve.s_alpha
    theta_alpha = 1.0 + spectral_derivative(curve.phi)
    v_alpha = spectral_derivative(v_normal)
    full = (theta_alpha * t_tangential - v_alpha) / s_alpha
    k3 = np.abs(fourier_modes(curve.n)).astype(float) ** 3
    return np.fft.fft(full) + ssd_prefactor * (k3 / s_alpha**3) * theta_hat


def _propagators(n, dt, s_prev, s_now, s_next, prefactor):
    """Integrating factors over (t_n, t_{n+1}) and (t_{n-1}, t_{n+1}),
    with the 1/s_alpha^3 history integrated by the trapezoid rule."""
    k3 = prefactor * np.abs(fourier_modes(n)).astype(float) ** 3
    int_one = 0.5 * dt * (s_now**-3 + s_next**-3)
    int_two = dt * (0.5 * s_prev**-3 + s_now**-3 + 0.5 * s_next**-3)
    return np.exp(-k3 * int_one), np.exp(-k3 * int_two)


def _apply_filters(spectrum, settings):
    out = fourier_filter(spectrum, order=settings.filter_order,
                         strength=settings.filter_strength)
    return krasny_filter(out, threshold=settings.krasny_threshold)


def bootstrap(curve, field_solver, dt, settings=StepperSettings(),
              apoptosis=None, solution=None):
    """First step: explicit Euler for the metric, one-step propagator for phi.

    Returns (state at t = dt, field solution at t = 0).  A precomputed field
    solution for `curve` may be passed to avoid a duplicate solve.
    """
    if solution is None:
        solution = field_solver(curve, apoptosis=apoptosis)
    v_normal = solution.stokes.v_normal
    theta_alpha = 1.0 + spectral_derivative(curve.phi)
    t_tan = tangential_velocity(v_normal, theta_alpha)
    m_rate = arclength_rate(v_normal, theta_alpha)
    theta_hat = np.fft.fft(curve.phi)
    n_hat = nonlinear_spectrum(curve, theta_hat, v_normal, t_tan,
                               settings.ssd_prefactor)

    s_next = curve.s_alpha + dt * m_rate
    if s_next <= 0.0:
        raise BlowUpError(f"metric became nonpositive ({s_next:.3e})")
    e_one, _ = _propagators(curve.n, dt, curve.s_alpha, curve.s_alpha, s_next,
                            settings.ssd_prefactor)
    phi_hat = _apply_filters(e_one * (theta_hat + dt * n_hat), settings)

    ref_vel = v_normal[0] * curve.normals()[0]
    ref_next = np.asarray(curve.ref_point) + dt * ref_vel
    new_curve = Curve(phi=np.fft.ifft(phi_hat).real, s_alpha=s_next,
                      ref_point=(float(ref_next[0]), float(ref_next[1])))
    state = StepperState(curve=new_curve, theta_hat=phi_hat, n_hat_prev=n_hat,
                         s_alpha_prev=curve.s_alpha, m_prev=m_rate,
                         ref_velocity_prev=ref_vel, t=dt, dt=dt, step_index=1)
    return state, solution


def step(state, field_solver, settings=StepperSettings(), apoptosis=None,
         solution=None):
    """One Adams-Bashforth / linear-propagator step.

    Returns (state at t_{n+1}, field solution at t_n).  A precomputed field
    solution for the current curve may be passed to avoid a duplicate solve.
    """
    curve = state.curve
    dt = state.dt
    if solution is None:
        solution = field_solver(curve, apoptosis=apoptosis)
    v_normal = solution.stokes.v_normal
    theta_alpha = 1.0 + spectral_derivative(curve.phi)
    t_tan = tangential_velocity(v_normal, theta_alpha)
    m_rate = arclength_rate(v_normal, theta_alpha)
    n_hat = nonlinear_spectrum(curve, state.theta_hat, v_normal, t_tan,
                               settings.ssd_prefactor)

    s_next = curve.s_alpha + 0.5 * dt * (3.0 * m_rate - state.m_prev)
    if s_next <= 0.0:
        raise BlowUpError(f"metric became nonpositive ({s_next:.3e})")
    e_one, e_two = _propagators(curve.n, dt, state.s_alpha_prev, curve.s_alpha,
                                s_next, settings.ssd_prefactor)
    phi_hat = (e_one * state.theta_hat
               + 0.5 * dt * (3.0 * e_one * n_hat
                             - e_two * state.n_hat_prev))
    phi_hat = _apply_filters(phi_hat, settings)

    ref_vel = v_normal[0] * curve.normals()[0]
    ref_next = (np.asarray(curve.ref_point)
                + 0.5 * dt * (3.0 * ref_vel - state.ref_velocity_prev))
    new_curve = Curve(phi=np.fft.ifft(phi_hat).real, s_alpha=s_next,
                      ref_point=(float(ref_next[0]), float(ref_next[1])))
    new_state = StepperState(curve=new_curve, theta_hat=phi_hat,
                             n_hat_prev=n_hat, s_alpha_prev=curve.s_alpha,
                             m_prev=m_rate, ref_velocity_prev=ref_vel,
                             t=state.t + dt, dt=dt,
                             step_index=state.step_index + 1)
    return new_state, solution


def reproject(state):
    """Scrub parametrization drift by re-running the equal-arclength
    projection on the reconstructed markers."""
    new_curve = from_markers(reconstruct(state.curve).points)
    return replace(state, curve=new_curve,
                   theta_hat=np.fft.fft(new_curve.phi))


DIAGNOSTICS_HEADER = ("t", "R_eff", "area", "length", "shape_factor", "A",
                      "gmres_nutrient_iters", "gmres_stokes_iters")
SNAPSHOT_HEADER = ("alpha", "x", "y", "kappa", "V")


@dataclass
class RunResult:
    diagnostics: np.ndarray      # one row per time level, DIAGNOSTICS_HEADER
    snapshots: list              # dicts: step, t, markers, kappa, v_normal
    final_curve: Curve


def _snapshot_path(output_dir, step_index):
    return os.path.join(output_dir, f"interface_{step_index:06d}.csv")


def run(initial_curve, field_solver, dt, t_final, output_dir,
        settings=StepperSettings(), snapshot_interval=50,
        apoptosis_schedule=None):
    """Drive the evolution, emitting snapshots and per-step diagnostics.

    `apoptosis_schedule` is None for the solver's fixed ratio, or a callable
    effective_radius -> apoptosis evaluated before every solve (size-dependent
    control).  On a step failure the last valid outputs are flushed before the
    error propagates.
    """
    n_steps = int(round(t_final / dt)) if t_final > 0 else 0
    os.makedirs(output_dir, exist_ok=True)

    rows = []
    snapshots = []
    state = None
    curve = initial_curve

    def record(step_index, t_now, current, solution, a_used, geo):
        area, r_eff, _ = geo
        markers = reconstruct(current)
        sf = shape_factor(markers)
        rows.append((t_now, r_eff, area, current.length, sf, a_used,
                     solution.nutrient_iterations,
                     solution.stokes_iterations))
        take_snap = (snapshot_interval > 0
                     and step_index % snapshot_interval == 0)
        if take_snap or step_index == n_steps:
            snap = {"step": step_index, "t": t_now, "markers": markers.points,
                    "kappa": solution.kappa,
                    "v_normal": solution.stokes.v_normal}
            snapshots.append(snap)
            data = np.column_stack([current.alphas, markers.points,
                                    solution.kappa,
                                    solution.stokes.v_normal])
            write_csv_atomic(_snapshot_path(output_dir, step_index),
                             SNAPSHOT_HEADER, data.tolist())

    def resolve_apoptosis(current):
        geo = geometry_stats(reconstruct(current))
        if apoptosis_schedule is None:
            return None, geo
        return apoptosis_schedule(geo[1]), geo

    try:
        for k in range(n_steps):
            a_used, geo = resolve_apoptosis(curve)
            solution = field_solver(curve, apoptosis=a_used)
            a_row = (a_used if a_used is not None
                     else field_solver.params.apoptosis)
            record(k, k * dt, curve, solution, a_row, geo)
            if k == 0:
                state, _ = bootstrap(curve, field_solver, dt, settings,
                                     solution=solution)
            else:
                state, _ = step(state, field_solver, settings,
                                solution=solution)
            curve = state.curve
            if (settings.reproject_interval > 0
                    and state.step_index % settings.reproject_interval == 0):
                state = reproject(state)
                curve = state.curve
        # final time level: one more field solve for complete diagnostics
        a_used, geo = resolve_apoptosis(curve)
        solution = field_solver(curve, apoptosis=a_used)
        a_row = a_used if a_used is not None else field_solver.params.apoptosis
        record(n_steps, n_steps * dt, curve, solution, a_row, geo)
    finally:
        if rows:
            write_csv_atomic(os.path.join(output_dir, "diagnostics.csv"),
                             DIAGNOSTICS_HEADER, rows)

    return RunResult(diagnostics=np.array(rows), snapshots=snapshots,
                     final_curve=curve)


def self_similar_schedule(mode, viscosity_ratio, s_inv):
    """Apoptosis-vs-size control law holding the linear shape factor fixed."""
    def schedule(effective_radius):
        return self_similar_apoptosis(effective_radius, mode, viscosity_ratio,
                                      s_inv)
    return schedule
