"""Spectrally accurate quadrature for periodic log-singular integrals.

The Green's-function kernels are decomposed as
    K(alpha, alpha') = g1(alpha, alpha') * ln|2 sin((alpha-alpha')/2)| + g2
with g2 smooth; the log factor integrates under the Kress product rule and g2
under the plain (spectral) trapezoid rule.  Diagonal values of the smooth
Stokes kernels are obtained once per curve by Richardson extrapolation on an
FFT-refined sampling of the interface, which sidesteps hand-derived Taylor
limits and their sign pitfalls.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .curve import curvature, reconstruct
from .special import (
    i0_with_k0_regular,
    i1_with_k1_regular,
    trig_interp_upsample,
)

_LN2 = np.log(2.0)
_UPSAMPLE = 8


@lru_cache(maxsize=8)
def kress_weights(m):
    """Product-quadrature weights q_j, j = 0..2m-1, for the ln|2 sin| kernel.

    q_j = -(pi/m) * sum_{k=1}^{m-1} cos(k j pi / m)/k  -  (-1)^j pi/(2 m^2)
    """
    if m < 2:
        raise ValueError("need at least 4 grid points (m >= 2)")
    j = np.arange(2 * m)
    k = np.arange(1, m)
    cos_table = np.cos(np.outer(j, k) * np.pi / m)
    q = -(np.pi / m) * cos_table @ (1.0 / k) - ((-1.0) ** j) * np.pi / (2 * m * m)
    return q


@lru_cache(maxsize=8)
def kress_matrix(n):
    """Circulant matrix Q[i, j] = q_{|i-j|} for an n-point grid."""
    q = kress_weights(n // 2)
    idx = np.abs(np.arange(n)[:, None] - np.arange(n)[None, :])
    return q[idx]


def log_quadrature(f_vals, target_index, weights):
    """Sum_j q_{|j-i|} f(alpha_j): the log-kernel integral at grid point i."""
    f_vals = np.asarray(f_vals, dtype=float)
    n = f_vals.size
    idx = np.abs(np.arange(n) - target_index)
    return float(np.asarray(weights)[idx] @ f_vals)


@dataclass(frozen=True)
class SplitKernel:
    """Kernel split K = g1 * ln|2 sin((a-a')/2)| + g2, with g2 smooth."""

    g1: np.ndarray
    g2: np.ndarray


class CurvePairwise:
    """Pairwise geometry between grid points of one curve.

    Index convention: entry [i, j] couples target alpha_i with source alpha_j,
    and dx = x_source - x_target.  All derived kernels share these arrays.
    """

    def __init__(self, curve):
        self.curve = curve
        self.markers = reconstruct(curve)
        n = curve.n
        self.n = n
        self.s_alpha = curve.s_alpha
        self.trap_w = 2.0 * np.pi / n

        pts = self.markers.points
        self.x = pts[:, 0]
        self.y = pts[:, 1]
        self.normals = curve.normals()
        self.tangents = curve.tangents()
        self.kappa = curvature(curve)

        self.dx = self.x[None, :] - self.x[:, None]
        self.dy = self.y[None, :] - self.y[:, None]
        self.r2 = self.dx**2 + self.dy**2
        np.fill_diagonal(self.r2, 1.0)
        self.r = np.sqrt(self.r2)
        np.fill_diagonal(self.r, 0.0)

        alphas = curve.alphas
        d_alpha = alphas[:, None] - alphas[None, :]
        two_sin = np.abs(2.0 * np.sin(0.5 * d_alpha))
        np.fill_diagonal(two_sin, 1.0)
        self.log_2sin = np.log(two_sin)
        np.fill_diagonal(self.log_2sin, 0.0)

        # ln(r / |2 sin|): smooth, diagonal value ln(s_alpha)
        rr = self.r.copy()
        np.fill_diagonal(rr, 1.0)
        self.log_r_over_2sin = np.log(rr / two_sin)
        np.fill_diagonal(self.log_r_over_2sin, np.log(self.s_alpha))

        # ((x' - x) . n') / r^2: smooth, diagonal value kappa/2
        nx, ny = self.normals[:, 0], self.normals[:, 1]
        w_num = self.dx * nx[None, :] + self.dy * ny[None, :]
        self.w_over_r2 = w_num / self.r2
        np.fill_diagonal(self.w_over_r2, 0.5 * self.kappa)

        self._fine = None

    # -- refined sampling for Richardson diagonals ------------------------

    def _fine_sampling(self):
        if self._fine is None:
            up = _UPSAMPLE
            n = self.n
            xf = trig_interp_upsample(self.x, up)
            yf = trig_interp_upsample(self.y, up)
            phif = trig_interp_upsample(self.curve.phi, up)
            alphaf = 2.0 * np.pi * np.arange(up * n) / (up * n)
            thetaf = alphaf + phif
            self._fine = (xf, yf, np.sin(thetaf), -np.cos(thetaf))
        return self._fine

    def smooth_diagonal(self, kernel_fn, n_components):
        """Diagonal limits of a smooth pair kernel by Richardson extrapolation.

        kernel_fn(dx, dy, r2, nx_src, ny_src) returns a tuple of
        `n_components` arrays; offsets h, h/2, h/4 around each node (averaged
        over both sides) feed a sixth-order extrapolation.
        """
        xf, yf, nxf, nyf = self._fine_sampling()
        up = _UPSAMPLE
        n = self.n
        base = up * np.arange(n)

        levels = []
        for m in (4, 2, 1):
            acc = None
            for sgn in (+1, -1):
                idx = (base + sgn * m) % (up * n)
                ddx = xf[idx] - self.x
                ddy = yf[idx] - self.y
                rr2 = ddx**2 + ddy**2
                vals = kernel_fn(ddx, ddy, rr2, nxf[idx], nyf[idx])
                if acc is None:
                    acc = [0.5 * v for v in vals]
                else:
                    acc = [a + 0.5 * v for a, v in zip(acc, vals)]
            levels.append(acc)
        g_h, g_h2, g_h4 = levels
        out = []
        for c in range(n_components):
            r1 = (4.0 * g_h2[c] - g_h[c]) / 3.0
            r2 = (4.0 * g_h4[c] - g_h2[c]) / 3.0
            out.append((16.0 * r2 - r1) / 15.0)
        return out


# ---------------------------------------------------------------------------
# Modified-Helmholtz kernels (nutrient field)
# ---------------------------------------------------------------------------

def helmholtz_single_split(pw):
    """Split of the single-layer kernel -K0(r)/(2 pi).

    g1 = I0(r)/(2 pi); smooth part has diagonal (ln(s_alpha/2) + gamma)/(2 pi).
    """
    i0, reg0 = i0_with_k0_regular(pw.r)
    ln_half = pw.log_r_over_2sin - _LN2     # ln(r/2) - ln|2 sin|
    g1 = i0 / (2.0 * np.pi)
    g2 = (i0 * ln_half - reg0) / (2.0 * np.pi)
    return SplitKernel(g1=g1, g2=g2)


def helmholtz_double_split(pw):
    """Split of the normal-derivative kernel d/dn' [-K0(r)/(2 pi)].

    With w = ((x'-x) . n')/r the kernel is K1(r) w / (2 pi); the smooth part
    has diagonal kappa/(4 pi).
    """
    i1, reg1 = i1_with_k1_regular(pw.r)
    ln_half = pw.log_r_over_2sin - _LN2
    w = pw.w_over_r2 * pw.r                 # vanishes on the diagonal
    g1 = w * i1 / (2.0 * np.pi)
    g2 = (pw.w_over_r2 + w * (i1 * ln_half + reg1)) / (2.0 * np.pi)
    return SplitKernel(g1=g1, g2=g2)


def nystrom_matrix(pw, split):
    """Dense Nystrom matrix of a scalar layer operator with split kernel.

    Applies Kress weights to the g1 part and the trapezoid rule to g2, with
    the (uniform) arclength element folded in.
    """
    return (kress_matrix(pw.n) * split.g1 + pw.trap_w * split.g2) * pw.s_alpha


# ---------------------------------------------------------------------------
# Stokes kernels
# ---------------------------------------------------------------------------

def _stresslet_components(dx, dy, r2, nx_src, ny_src):
    wn = dx * nx_src + dy * ny_src
    fac = -4.0 * wn / (r2 * r2)
    return fac * dx * dx, fac * dx * dy, fac * dy * dy


def _rational_components(dx, dy, r2, nx_src, ny_src):
    return dx * dx / r2, dx * dy / r2, dy * dy / r2


def stokeslet_log_split(pw):
    """Split of the -ln r term of the Stokeslet: g1 = -1, smooth remainder
    -ln(r/|2 sin|) with diagonal -ln(s_alpha)."""
    g1 = -np.ones((pw.n, pw.n))
    g2 = -pw.log_r_over_2sin
    return SplitKernel(g1=g1, g2=g2)


class StokesOperators:
    """Discrete single-layer and double-layer Stokes operators on one curve.

    Single layer: S[f]_j = (1/4 pi) \\int (-f_j ln r + f_i xh_i xh_j / r^2) ds'
    Double layer: D[u]_j = (1/4 pi) \\int u_i T_ijk n_k(x') ds',
                  T_ijk = -4 xh_i xh_j xh_k / r^4,  xh = x' - x.

    Vector grid functions are (n, 2) arrays; the assembled blocks act on the
    x and y components separately (stacked, not interleaved).
    """

    def __init__(self, pw):
        self.pw = pw
        n = pw.n
        scale = pw.s_alpha / (4.0 * np.pi)

        split = stokeslet_log_split(pw)
        self.a_log = (kress_matrix(n) * split.g1 + pw.trap_w * split.g2) * scale

        rxx = pw.dx * pw.dx / pw.r2
        rxy = pw.dx * pw.dy / pw.r2
        ryy = pw.dy * pw.dy / pw.r2
        dxx, dxy, dyy = pw.smooth_diagonal(_rational_components, 3)
        np.fill_diagonal(rxx, dxx)
        np.fill_diagonal(rxy, dxy)
        np.fill_diagonal(ryy, dyy)
        w = pw.trap_w * scale
        self.r_xx, self.r_xy, self.r_yy = w * rxx, w * rxy, w * ryy

        nx, ny = pw.normals[:, 0], pw.normals[:, 1]
        wn = pw.dx * nx[None, :] + pw.dy * ny[None, :]
        fac = -4.0 * wn / (pw.r2 * pw.r2)
        wxx = fac * pw.dx * pw.dx
        wxy = fac * pw.dx * pw.dy
        wyy = fac * pw.dy * pw.dy
        sxx, sxy, syy = pw.smooth_diagonal(_stresslet_components, 3)
        np.fill_diagonal(wxx, sxx)
        np.fill_diagonal(wxy, sxy)
        np.fill_diagonal(wyy, syy)
        self.w_xx, self.w_xy, self.w_yy = w * wxx, w * wxy, w * wyy

    def single_layer(self, f):
        fx, fy = f[:, 0], f[:, 1]
        out = np.empty_like(f)
        out[:, 0] = self.a_log @ fx + self.r_xx @ fx + self.r_xy @ fy
        out[:, 1] = self.a_log @ fy + self.r_xy @ fx + self.r_yy @ fy
        return out

    def double_layer(self, u):
        ux, uy = u[:, 0], u[:, 1]
        out = np.empty_like(u)
        out[:, 0] = self.w_xx @ ux + self.w_xy @ uy
        out[:, 1] = self.w_xy @ ux + self.w_yy @ uy
        return out

    def system_matrix(self, coeff):
        """Dense matrix of v -> v - coeff * D[v] in stacked (x; y) ordering."""
        n = self.pw.n
        eye = np.eye(n)
        return np.block([
            [eye - coeff * self.w_xx, -coeff * self.w_xy],
            [-coeff * self.w_xy, eye - coeff * self.w_yy],
        ])


def stresslet_apply(pw, density):
    """Double-layer (stresslet) velocity of a vector density at every node.

    The kernel is smooth on a smooth curve; the quadrature is the plain
    trapezoid rule with Richardson-extrapolated diagonal values.
    """
    ops = StokesOperators(pw)
    return ops.double_layer(np.asarray(density, dtype=float))
