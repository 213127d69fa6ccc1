"""Kress quadrature, kernel splittings, and smooth-diagonal extrapolation."""

import numpy as np
import pytest

from tumorbim.curve import circle, perturbed_circle
from tumorbim.quadrature import (
    CurvePairwise,
    StokesOperators,
    helmholtz_double_split,
    helmholtz_single_split,
    kress_matrix,
    kress_weights,
    log_quadrature,
    nystrom_matrix,
    stokeslet_log_split,
    stresslet_apply,
)
from tumorbim.special import bessel_i, bessel_k


class TestKressWeights:
    def test_zero_sum(self):
        # the log kernel has zero mean over a period
        for m in (8, 32, 128):
            assert abs(kress_weights(m).sum()) < 1e-12

    def test_symmetry(self):
        q = kress_weights(16)
        assert q[1] == pytest.approx(q[31], rel=1e-12)
        assert q[5] == pytest.approx(q[27], rel=1e-12)

    def test_constant_density(self):
        q = kress_weights(32)
        assert abs(log_quadrature(np.ones(64), 0, q)) < 1e-12

    @pytest.mark.parametrize("k,expected", [(1, -np.pi), (2, -np.pi / 2)])
    def test_cosine_closed_forms(self, k, expected):
        n = 64
        a = 2.0 * np.pi * np.arange(n) / n
        q = kress_weights(n // 2)
        got = log_quadrature(np.cos(k * a), 0, q)
        assert got == pytest.approx(expected, abs=1e-12)

    def test_spectral_convergence_on_analytic_integrand(self):
        # integral of exp(cos a') ln|2 sin(a'/2)| = -2 pi sum I_k(1)/k
        exact = -2.0 * np.pi * sum(bessel_i(k, 1.0) / k
                                   for k in range(1, 40))
        errs = []
        for n in (8, 16, 32):
            a = 2.0 * np.pi * np.arange(n) / n
            got = log_quadrature(np.exp(np.cos(a)), 0, kress_weights(n // 2))
            errs.append(abs(got - exact))
        assert errs[0] / max(errs[1], 1e-15) > 10.0
        assert errs[1] < 1e-6 and errs[2] < 1e-13


def raw_helmholtz_single(pw):
    out = -bessel_k(0, np.where(pw.r > 0, pw.r, 1.0)) / (2.0 * np.pi)
    np.fill_diagonal(out, np.nan)
    return out


def raw_helmholtz_double(pw):
    r = np.where(pw.r > 0, pw.r, 1.0)
    w = pw.w_over_r2 * pw.r        # ((x'-x) . n') / r
    out = bessel_k(1, r) * w / (2.0 * np.pi)
    np.fill_diagonal(out, np.nan)
    return out


class TestKernelSplits:
    @pytest.fixture(scope="class")
    def pw(self):
        return CurvePairwise(perturbed_circle(2.0, [(3, 0.1, "cos")], 64))

    def test_single_split_reproduces_kernel(self, pw):
        split = helmholtz_single_split(pw)
        combo = split.g1 * pw.log_2sin + split.g2
        raw = raw_helmholtz_single(pw)
        off = ~np.eye(pw.n, dtype=bool)
        assert np.abs(combo[off] - raw[off]).max() < 1e-12

    def test_double_split_reproduces_kernel(self, pw):
        split = helmholtz_double_split(pw)
        combo = split.g1 * pw.log_2sin + split.g2
        raw = raw_helmholtz_double(pw)
        off = ~np.eye(pw.n, dtype=bool)
        assert np.abs(combo[off] - raw[off]).max() < 1e-12

    def test_stokeslet_log_split_reproduces_kernel(self, pw):
        split = stokeslet_log_split(pw)
        combo = split.g1 * pw.log_2sin + split.g2
        off = ~np.eye(pw.n, dtype=bool)
        raw = -np.log(np.where(pw.r > 0, pw.r, 1.0))
        assert np.abs(combo[off] - raw[off]).max() < 1e-12

    def test_double_diagonal_matches_richardson(self):
        # extrapolate the smooth part toward the diagonal from grid columns
        # (offsets h, h/2, h/4 with h = 4 grid spacings)
        pw = CurvePairwise(perturbed_circle(2.0, [(3, 0.1, "cos")], 512))
        split = helmholtz_double_split(pw)
        diag = np.diag(split.g2)
        n = pw.n
        vals = []
        for m in (4, 2, 1):
            plus = split.g2[np.arange(n), (np.arange(n) + m) % n]
            minus = split.g2[np.arange(n), (np.arange(n) - m) % n]
            vals.append(0.5 * (plus + minus))
        r1 = (4.0 * vals[1] - vals[0]) / 3.0
        r2 = (4.0 * vals[2] - vals[1]) / 3.0
        extrap = (16.0 * r2 - r1) / 15.0
        assert np.abs(extrap - diag).max() < 1e-7

    def test_double_diagonal_closed_form(self):
        # kernel orientation gives +kappa/(4 pi) on the diagonal
        pw = CurvePairwise(circle(2.0, 64))
        split = helmholtz_double_split(pw)
        kappa = 0.5
        assert np.abs(np.diag(split.g2)
                      - kappa / (4.0 * np.pi)).max() < 1e-13

    def test_stokeslet_log_smooth_diagonal(self, pw):
        split = stokeslet_log_split(pw)
        assert np.abs(np.diag(split.g2)
                      + np.log(pw.s_alpha)).max() < 1e-13


class TestStokesOperators:
    def test_rational_diagonal_is_tangent_product(self):
        pw = CurvePairwise(perturbed_circle(2.0, [(3, 0.1, "cos")], 128))
        ops = StokesOperators(pw)
        w = pw.trap_w * pw.s_alpha / (4.0 * np.pi)
        tx, ty = pw.tangents[:, 0], pw.tangents[:, 1]
        assert np.abs(np.diag(ops.r_xx) / w - tx * tx).max() < 1e-8
        assert np.abs(np.diag(ops.r_xy) / w - tx * ty).max() < 1e-8
        assert np.abs(np.diag(ops.r_yy) / w - ty * ty).max() < 1e-8

    def test_stresslet_diagonal_against_refinement(self):
        # doubling the grid must reproduce the same diagonal limit values
        coarse = CurvePairwise(perturbed_circle(2.0, [(3, 0.1, "cos")], 64))
        fine = CurvePairwise(perturbed_circle(2.0, [(3, 0.1, "cos")], 128))
        w_c = coarse.trap_w * coarse.s_alpha / (4.0 * np.pi)
        w_f = fine.trap_w * fine.s_alpha / (4.0 * np.pi)
        d_c = np.diag(StokesOperators(coarse).w_xx) / w_c
        d_f = np.diag(StokesOperators(fine).w_xx)[::2] / w_f
        assert np.abs(d_c - d_f).max() < 1e-8

    def test_stresslet_kernel_odd_under_reflection(self):
        rng = np.random.default_rng(0)
        dx, dy = rng.standard_normal(5), rng.standard_normal(5)
        nx, ny = rng.standard_normal(5), rng.standard_normal(5)
        r2 = dx**2 + dy**2
        from tumorbim.quadrature import _stresslet_components
        a = _stresslet_components(dx, dy, r2, nx, ny)
        b = _stresslet_components(-dx, -dy, r2, nx, ny)
        for u, v in zip(a, b):
            assert np.allclose(u, -v, atol=1e-14)

    def test_double_layer_constant_density_circle(self):
        # interior/exterior jump identity: PV value is -c/2 on the boundary
        pw = CurvePairwise(circle(2.0, 128))
        const = np.tile([0.4, -1.1], (128, 1))
        got = stresslet_apply(pw, const)
        assert np.abs(got + 0.5 * const).max() < 1e-12

    def test_double_layer_radial_density_circle(self):
        pw = CurvePairwise(circle(1.0, 128))
        got = stresslet_apply(pw, pw.normals)
        assert np.abs(got - 0.5 * pw.normals).max() < 1e-12

    def test_single_layer_radial_density_vanishes(self):
        pw = CurvePairwise(circle(3.0, 128))
        ops = StokesOperators(pw)
        assert np.abs(ops.single_layer(pw.normals)).max() < 1e-12


class TestNystromAssembly:
    def test_single_layer_unit_density_circle(self):
        # Graf identity: S[1] on a circle of radius R is -R I0(R) K0(R)
        radius, n = 1.0, 128
        pw = CurvePairwise(circle(radius, n))
        mat = nystrom_matrix(pw, helmholtz_single_split(pw))
        got = mat @ np.ones(n)
        expected = -radius * bessel_i(0, radius) * bessel_k(0, radius)
        assert np.abs(got - expected).max() < 1e-12

    def test_single_layer_cosine_density_circle(self):
        radius, n = 2.0, 128
        pw = CurvePairwise(circle(radius, n))
        mat = nystrom_matrix(pw, helmholtz_single_split(pw))
        a = pw.curve.alphas
        got = mat @ np.cos(a)
        expected = (-radius * bessel_i(1, radius) * bessel_k(1, radius)
                    * np.cos(a))
        assert np.abs(got - expected).max() < 1e-12

    def test_spectral_convergence_of_single_layer(self):
        radius = 1.5
        expected = -radius * bessel_i(0, radius) * bessel_k(0, radius)
        errs = []
        for n in (8, 16, 32):
            pw = CurvePairwise(circle(radius, n))
            mat = nystrom_matrix(pw, helmholtz_single_split(pw))
            errs.append(np.abs(mat @ np.ones(n) - expected).max())
        assert errs[0] / max(errs[1], 1e-16) > 10.0
        assert errs[2] < 1e-12
