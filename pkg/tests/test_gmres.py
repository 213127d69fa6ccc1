"""Dense restarted GMRES against direct-elimination oracles."""

import numpy as np
import pytest

from tumorbim.gmres import gmres


def test_identity_one_iteration():
    b = np.array([1.0, -2.0, 3.0])
    x, report = gmres(np.eye(3), b, tol=1e-14)
    assert np.allclose(x, b, atol=1e-14)
    assert report.iterations == 1
    assert report.converged


def test_diagonal_system():
    x, report = gmres(np.diag([2.0, 3.0]), np.array([2.0, 3.0]), tol=1e-14)
    assert np.allclose(x, [1.0, 1.0], atol=1e-13)
    assert report.converged


def test_random_system_vs_lu():
    rng = np.random.default_rng(42)
    a = np.eye(50) + 0.1 * rng.standard_normal((50, 50))
    b = rng.standard_normal(50)
    x_ref = np.linalg.solve(a, b)
    x, report = gmres(a, b, tol=1e-13, restart=50, maxit=200)
    assert report.converged
    assert np.linalg.norm(x - x_ref) < 1e-10


def test_callable_operator():
    rng = np.random.default_rng(0)
    a = np.eye(20) + 0.05 * rng.standard_normal((20, 20))
    b = rng.standard_normal(20)
    x, report = gmres(lambda v: a @ v, b, tol=1e-12)
    assert report.converged
    assert np.linalg.norm(a @ x - b) / np.linalg.norm(b) <= 1e-12


def test_orthogonal_matrix_converges_within_n():
    rng = np.random.default_rng(9)
    q, _ = np.linalg.qr(rng.standard_normal((30, 30)))
    b = rng.standard_normal(30)
    x, report = gmres(q, b, tol=1e-14, restart=30, maxit=120)
    assert report.converged
    assert report.iterations <= 30


def test_residual_history_monotone_per_cycle():
    rng = np.random.default_rng(3)
    a = np.eye(40) + 0.3 * rng.standard_normal((40, 40))
    b = rng.standard_normal(40)
    _, report = gmres(a, b, tol=1e-13, restart=10, maxit=200)
    hist = np.array(report.residual_history)
    # within each 10-iteration cycle the estimated residual cannot grow
    for start in range(0, len(hist), 10):
        cycle = hist[start:start + 10]
        assert np.all(np.diff(cycle) <= 1e-14)


def test_maxit_reports_failure():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((60, 60))  # poorly conditioned on purpose
    b = rng.standard_normal(60)
    x, report = gmres(a, b, tol=1e-16, restart=5, maxit=7)
    assert not report.converged
    assert report.iterations == 7
    assert x.shape == b.shape


def test_zero_rhs():
    x, report = gmres(np.eye(4), np.zeros(4))
    assert np.all(x == 0.0)
    assert report.converged
    assert report.iterations == 0


def test_true_residual_reported():
    rng = np.random.default_rng(12)
    a = np.eye(25) + 0.1 * rng.standard_normal((25, 25))
    b = rng.standard_normal(25)
    x, report = gmres(a, b, tol=1e-12)
    true_res = np.linalg.norm(a @ x - b) / np.linalg.norm(b)
    assert report.residual == pytest.approx(true_res, rel=1e-9, abs=1e-15)
