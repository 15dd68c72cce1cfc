"""Independent oracles used by the test suite.

These deliberately avoid the package's coordinate-descent machinery: the
scalar parameter (eps_inf or gamma) is located by dense grid search with a
closed-form normal-equations solve of the log-linear block at each grid
point.  Slow but unambiguous.
"""

import numpy as np

from scalefit.models import M2Params, M3Params, M4Params


def _normal_eq(A, y):
    # hand-rolled normal equations, independent of numpy.linalg.lstsq
    return np.linalg.solve(A.T @ A, A.T @ y)


def grid_fit_m2(curve, n_grid=2000):
    """Best M2 params over a dense eps_inf grid in [0, min eps)."""
    eps = curve.eps_array
    logx = np.log(curve.x_array)
    A = np.column_stack([np.ones_like(logx), logx])
    best = (np.inf, None)
    for e_inf in np.linspace(0.0, float(eps.min()) * (1 - 1e-9), n_grid, endpoint=False):
        y = np.log(eps - e_inf)
        b0, c = _normal_eq(A, y)
        loss = float(np.mean((y - A @ (b0, c)) ** 2))
        if loss < best[0]:
            best = (loss, M2Params(eps_inf=e_inf, beta=float(np.exp(b0)), c=float(c)))
    return best[1]


def grid_fit_m3(curve, gammas=None):
    """Best M3 params over a gamma grid (0 plus a wide log grid)."""
    y = np.log(curve.eps_array)
    inv_x = 1.0 / curve.x_array
    if gammas is None:
        gammas = np.concatenate([[0.0], np.geomspace(1e-8, 10.0, 4000)])
    best = (np.inf, None)
    for gamma in gammas:
        A = np.column_stack([np.ones_like(inv_x), np.log(inv_x + gamma)])
        b0, c = _normal_eq(A, y)
        loss = float(np.mean((y - A @ (b0, c)) ** 2))
        if loss < best[0]:
            best = (loss, M3Params(beta=float(np.exp(b0)), c=float(c), gamma=float(gamma)))
    return best[1]


def grid_fit_m4(curve, n_grid=2000, fix_alpha_zero=False):
    """Best M4 params over a dense eps_inf grid, alpha projected to >= 0."""
    eps = curve.eps_array
    eps0 = curve.eps0
    logx = np.log(curve.x_array)
    ones = np.ones_like(logx)
    log_gap = np.log(eps0 - eps)
    best = (np.inf, None)
    for e_inf in np.linspace(0.0, float(eps.min()) * (1 - 1e-9), n_grid, endpoint=False):
        y = np.log(eps - e_inf)
        if fix_alpha_zero:
            alpha = 0.0
            A = np.column_stack([ones, logx])
            b0, c = _normal_eq(A, y)
            loss = float(np.mean((y - A @ (b0, c)) ** 2))
        else:
            A = np.column_stack([log_gap, ones, logx])
            alpha, b0, c = _normal_eq(A, y)
            if alpha < 0:
                alpha = 0.0
                A2 = np.column_stack([ones, logx])
                b0, c = _normal_eq(A2, y)
                loss = float(np.mean((y - A2 @ (b0, c)) ** 2))
            else:
                loss = float(np.mean((y - A @ (alpha, b0, c)) ** 2))
        if loss < best[0]:
            best = (loss, M4Params(eps0=eps0, eps_inf=float(e_inf), alpha=float(alpha),
                                   beta=float(np.exp(b0)), c=float(c)))
    return best[1]


def relerr(a, b, floor=1e-12):
    """|a - b| relative to |b| with a small floor for near-zero truths."""
    return abs(a - b) / max(abs(b), floor)
