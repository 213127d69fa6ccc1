"""Command-line driver: simulate, linear, selfsimilar.

Exit codes: 0 success, 2 configuration error, 3 solver failure.
"""

import argparse
import os
import sys

import numpy as np

from . import report
from .config import ConfigError, parse_config
from .curve import perturbed_circle
from .output import write_csv_atomic
from .stability import (
    LinearState,
    integrate_linear,
    marginal_s_inv,
    radius_rate,
)
from .stepper import StepperSettings, run, self_similar_schedule
from .stokes import InterfaceFieldSolver, PhysParams

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3


def _stepper_settings(cfg):
    num = cfg.numerics
    return StepperSettings(
        filter_strength=num.filter_strength, filter_order=num.filter_order,
        krasny_threshold=num.krasny_threshold,
        ssd_prefactor=num.ssd_prefactor,
        reproject_interval=num.reproject_interval)


def _field_solver(cfg, apoptosis):
    num = cfg.numerics
    params = PhysParams(apoptosis=apoptosis,
                        viscosity_ratio=cfg.viscosity_ratio)
    return InterfaceFieldSolver(
        params, cfg.bending,
        gmres_tol_nutrient=num.gmres_tol_nutrient,
        gmres_tol_stokes=num.gmres_tol_stokes,
        gmres_restart=num.gmres_restart, gmres_maxit=num.gmres_maxit,
        filter_strength=num.filter_strength, filter_order=num.filter_order)


def _simulate(cfg, self_similar_required=False):
    if self_similar_required and not cfg.self_similar:
        raise ConfigError('selfsimilar runs need "A": "self-similar"')
    if cfg.self_similar:
        if len(cfg.modes) != 1:
            raise ConfigError(
                "self-similar control needs exactly one perturbation mode")
        mode = cfg.modes[0][0]
        if mode < 2:
            raise ConfigError("self-similar control needs mode l >= 2")
        schedule = self_similar_schedule(mode, cfg.viscosity_ratio, cfg.s_inv)
        solver = _field_solver(cfg, apoptosis=0.0)  # overridden per step
    else:
        schedule = None
        solver = _field_solver(cfg, apoptosis=cfg.apoptosis)

    curve = perturbed_circle(cfg.r0, cfg.modes, cfg.n_points)
    result = run(curve, solver, cfg.dt, cfg.t_final, cfg.output_dir,
                 settings=_stepper_settings(cfg),
                 snapshot_interval=cfg.snapshot_interval,
                 apoptosis_schedule=schedule)
    if cfg.figures:
        report.save_run_figures(cfg.output_dir, result)
    return result


def _linear_tables(cfg):
    os.makedirs(cfg.output_dir, exist_ok=True)
    radii = np.linspace(cfg.r_min, cfg.r_max, cfg.r_samples)

    by_lambda = {lam: [marginal_s_inv(cfg.mode, cfg.apoptosis, r, lam)
                       for r in radii]
                 for lam in cfg.viscosity_ratios}
    header = ["R"] + [f"S_inv_marginal_lambda_{lam}" for lam in
                      cfg.viscosity_ratios]
    rows = [[r] + [by_lambda[lam][i] for lam in cfg.viscosity_ratios]
            for i, r in enumerate(radii)]
    write_csv_atomic(os.path.join(cfg.output_dir, "marginal_stability.csv"),
                     header, rows)

    radii_g = np.linspace(0.05, cfg.r_max + 1.0, cfg.r_samples)
    by_a = {a: [radius_rate(r, a) for r in radii_g]
            for a in cfg.apoptosis_values}
    header = ["R"] + [f"dR_dt_A_{a}" for a in cfg.apoptosis_values]
    rows = [[r] + [by_a[a][i] for a in cfg.apoptosis_values]
            for i, r in enumerate(radii_g)]
    write_csv_atomic(os.path.join(cfg.output_dir, "growth_rate.csv"),
                     header, rows)

    state = LinearState(radius=cfg.r0, delta_over_r=cfg.delta_over_r0,
                        mode=cfg.mode, apoptosis=cfg.apoptosis,
                        viscosity_ratio=cfg.viscosity_ratios[0],
                        s_inv=cfg.s_inv)
    trajectory = integrate_linear(state, "constant", cfg.t_final, cfg.dt)
    write_csv_atomic(os.path.join(cfg.output_dir, "trajectory.csv"),
                     ["t", "R", "delta_over_R", "A"],
                     np.column_stack(trajectory).tolist())

    if cfg.figures:
        report.save_linear_figures(cfg.output_dir, (radii, by_lambda),
                                   (radii_g, by_a), trajectory)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tumorbim",
        description="Boundary-integral simulation of an elastic tumor-host "
                    "interface in two-phase Stokes flow")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
            ("simulate", "run the nonlinear interface evolution"),
            ("linear", "emit closed-form stability tables and trajectories"),
            ("selfsimilar", "run with the shape-preserving apoptosis "
                            "schedule")):
        p = sub.add_parser(name, help=text)
        p.add_argument("config", help="path to the JSON configuration")
        p.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE",
                       help="override a config scalar (dotted for nested)")
        p.add_argument("--output-dir", default=None,
                       help="override the output directory")
        p.add_argument("--no-figures", action="store_true",
                       help="skip PNG rendering, emit CSV only")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    overrides = list(args.overrides)
    if args.output_dir is not None:
        overrides.append(f"output_dir={args.output_dir}")
    if args.no_figures:
        overrides.append("figures=false")
    kind = "linear" if args.command == "linear" else "run"
    try:
        cfg = parse_config(args.config, overrides, kind=kind)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "linear":
            _linear_tables(cfg)
        else:
            try:
                _simulate(cfg,
                          self_similar_required=args.command == "selfsimilar")
            except ConfigError as exc:
                print(f"config error: {exc}", file=sys.stderr)
                return EXIT_CONFIG
    except Exception as exc:  # solver failure: partial outputs already flushed
        print(f"solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
