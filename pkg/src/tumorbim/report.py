"""Figure rendering for the CLI report path (PNG files next to the CSVs)."""

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _save(fig, outdir, name):
    path = os.path.join(outdir, name)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def save_run_figures(outdir, result):
    """Interface overlay + diagnostic time series for one simulation run."""
    paths = []
    fig, ax = plt.subplots(figsize=(6, 6))
    n_snaps = len(result.snapshots)
    for i, snap in enumerate(result.snapshots):
        pts = snap["markers"]
        closed = list(range(len(pts))) + [0]
        color = plt.cm.viridis(i / max(n_snaps - 1, 1))
        ax.plot(pts[closed, 0], pts[closed, 1], color=color, lw=1.0,
                label=f"t={snap['t']:.2f}" if n_snaps <= 8 else None)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title("interface evolution")
    if n_snaps <= 8:
        ax.legend(fontsize=8)
    paths.append(_save(fig, outdir, "interfaces.png"))

    diag = result.diagnostics
    t = diag[:, 0]
    fig, axes = plt.subplots(2, 2, figsize=(10, 7))
    axes[0, 0].plot(t, diag[:, 1])
    axes[0, 0].set_ylabel("effective radius")
    axes[0, 1].semilogy(t, diag[:, 4].clip(1e-16))
    axes[0, 1].set_ylabel("shape factor")
    axes[1, 0].plot(t, diag[:, 2], label="area")
    axes[1, 0].plot(t, diag[:, 3], label="length")
    axes[1, 0].legend(fontsize=8)
    axes[1, 0].set_ylabel("area / length")
    axes[1, 1].plot(t, diag[:, 5])
    axes[1, 1].set_ylabel("apoptosis ratio")
    for ax in axes.flat:
        ax.set_xlabel("t")
    fig.tight_layout()
    paths.append(_save(fig, outdir, "diagnostics.png"))
    return paths


def save_linear_figures(outdir, marginal_table, growth_table, trajectory):
    """Marginal-stability curves, growth-rate curves, and one ODE trajectory.

    marginal_table: (radii, {lambda: S_inv values});
    growth_table: (radii, {A: dR/dt values});
    trajectory: (t, R, delta_over_R, A).
    """
    paths = []
    radii, by_lambda = marginal_table
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for lam, vals in by_lambda.items():
        ax.plot(radii, vals, label=f"viscosity ratio {lam}")
    ax.set_xlabel("radius")
    ax.set_ylabel("marginal rigidity strength")
    ax.legend(fontsize=8)
    paths.append(_save(fig, outdir, "marginal_stability.png"))

    radii_g, by_a = growth_table
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for a, vals in by_a.items():
        ax.plot(radii_g, vals, label=f"A={a}")
    ax.axhline(0.0, color="k", lw=0.5)
    ax.set_xlabel("radius")
    ax.set_ylabel("dR/dt")
    ax.legend(fontsize=8)
    paths.append(_save(fig, outdir, "growth_rate.png"))

    t, rr, dd, aa = trajectory
    fig, axes = plt.subplots(1, 3, figsize=(12, 3.5))
    axes[0].plot(t, rr)
    axes[0].set_ylabel("R")
    axes[1].semilogy(t, abs(dd).clip(1e-18))
    axes[1].set_ylabel("shape factor")
    axes[2].plot(t, aa)
    axes[2].set_ylabel("apoptosis ratio")
    for ax in axes:
        ax.set_xlabel("t")
    fig.tight_layout()
    paths.append(_save(fig, outdir, "trajectory.png"))
    return paths
