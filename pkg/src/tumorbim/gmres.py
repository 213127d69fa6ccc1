"""Restarted GMRES for the dense second-kind systems.

The boundary-integral operators here are well conditioned, so no
preconditioning is offered; iteration counts are surfaced so conditioning
regressions show up in run diagnostics.
"""

from dataclasses import dataclass, field

import numpy as np


@dataclass
class SolveReport:
    iterations: int
    residual: float          # true relative residual, recomputed after solve
    converged: bool
    residual_history: list = field(default_factory=list)


def gmres(apply_op, b, tol=1e-12, restart=200, maxit=500):
    """Solve A x = b with restarted GMRES (modified Gram-Schmidt, one
    reorthogonalization pass, Givens least squares).

    `apply_op` is either a callable v -> A v or a dense matrix.  Returns
    (x, SolveReport); `converged` is judged on the recomputed true residual
    ||A x - b|| / ||b||.
    """
    if not callable(apply_op):
        mat = np.asarray(apply_op, dtype=float)
        apply_op = lambda v: mat @ v  # noqa: E731

    b = np.asarray(b, dtype=float)
    n = b.size
    norm_b = np.linalg.norm(b)
    history = []
    if norm_b == 0.0:
        return np.zeros(n), SolveReport(0, 0.0, True, history)

    x = np.zeros(n)
    total_iters = 0
    restart = min(restart, n)

    while total_iters < maxit:
        r = b - apply_op(x)
        beta = np.linalg.norm(r)
        if beta / norm_b <= tol:
            break
        v = np.empty((restart + 1, n))
        v[0] = r / beta
        h = np.zeros((restart + 1, restart))
        cs = np.zeros(restart)
        sn = np.zeros(restart)
        g = np.zeros(restart + 1)
        g[0] = beta
        k_used = 0
        for k in range(restart):
            if total_iters >= maxit:
                break
            w = apply_op(v[k])
            # modified Gram-Schmidt with one reorthogonalization pass
            for i in range(k + 1):
                h[i, k] = v[i] @ w
                w -= h[i, k] * v[i]
            for i in range(k + 1):
                corr = v[i] @ w
                h[i, k] += corr
                w -= corr * v[i]
            h_next = np.linalg.norm(w)
            h[k + 1, k] = h_next
            if h_next > 0.0:
                v[k + 1] = w / h_next
            # apply accumulated Givens rotations to the new column
            for i in range(k):
                t = cs[i] * h[i, k] + sn[i] * h[i + 1, k]
                h[i + 1, k] = -sn[i] * h[i, k] + cs[i] * h[i + 1, k]
                h[i, k] = t
            denom = np.hypot(h[k, k], h[k + 1, k])
            cs[k] = h[k, k] / denom if denom else 1.0
            sn[k] = h[k + 1, k] / denom if denom else 0.0
            h[k, k] = denom
            h[k + 1, k] = 0.0
            g[k + 1] = -sn[k] * g[k]
            g[k] = cs[k] * g[k]
            total_iters += 1
            k_used = k + 1
            history.append(abs(g[k + 1]) / norm_b)
            if abs(g[k + 1]) / norm_b <= tol or h_next == 0.0:
                break
        if k_used > 0:
            y = np.linalg.solve(np.triu(h[:k_used, :k_used]), g[:k_used])
            x = x + y @ v[:k_used]
        else:
            break

    true_res = float(np.linalg.norm(apply_op(x) - b) / norm_b)
    return x, SolveReport(total_iters, true_res, true_res <= tol, history)
