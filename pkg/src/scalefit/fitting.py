"""Square-log losses and the block coordinate descent fitters.

All four model classes minimize a squared residual in log space.  The
log-linear parameters (intercept/log beta, c, and alpha for M4) are solved
in closed form by least squares at each outer iteration; the remaining
parameter (eps_inf for M2/M4, gamma for M3) takes one gradient step per
outer iteration with a fixed learning rate, 1e-7 by default.  Iteration
stops when the loss decrease per outer iteration falls below
convergence_tol or max_outer_iters is reached.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .curve import LearningCurve
from .models import M1Params, M2Params, M3Params, M4Params


class FitError(RuntimeError):
    """A fit could not be carried out on the given curve."""


class DegenerateDesignError(FitError):
    """The least-squares design matrix is rank deficient."""


@dataclass(frozen=True)
class FitConfig:
    """Optimizer hyperparameters shared by all coordinate-descent fitters.

    learning_rate is in raw parameter units; rate_multiplier scales it
    uniformly (useful when a curve's scale makes 1e-7 impractically slow).
    A zero effective rate pins the gradient-descent parameter at its
    initialization.  backtracking halves a rejected gradient step until the
    loss is non-increasing; off by default to match the plain recipe.
    """

    learning_rate: float = 1e-7
    rate_multiplier: float = 1.0
    max_outer_iters: int = 100_000
    convergence_tol: float = 1e-8
    eps_inf_init_fraction: float = 0.5
    gamma_init: float = 0.0
    eps_inf_margin: float = 1e-6
    backtracking: bool = False

    def __post_init__(self):
        if self.learning_rate < 0 or self.rate_multiplier < 0:
            raise ValueError("learning rate terms must be nonnegative")
        if self.max_outer_iters < 1:
            raise ValueError("max_outer_iters must be positive")
        if self.convergence_tol <= 0:
            raise ValueError("convergence_tol must be positive")
        if not 0 <= self.eps_inf_init_fraction < 1:
            raise ValueError("eps_inf_init_fraction must be in [0, 1)")
        if self.gamma_init < 0:
            raise ValueError("gamma_init must be nonnegative")
        if self.eps_inf_margin <= 0:
            raise ValueError("eps_inf_margin must be positive")

    @property
    def effective_rate(self) -> float:
        return self.learning_rate * self.rate_multiplier


@dataclass(frozen=True)
class FitResult:
    params: object
    train_loss: float
    iterations: int
    converged: bool


def solve_loglinear(targets, features):
    """Least-squares coefficients for targets ~ features.

    features is an (n, k) matrix with n >= k.  Raises
    DegenerateDesignError on rank deficiency (e.g. all x equal).
    """
    A = np.asarray(features, dtype=float)
    y = np.asarray(targets, dtype=float)
    if A.ndim != 2 or A.shape[0] < A.shape[1]:
        raise DegenerateDesignError("fewer rows than coefficients")
    coeffs, _, rank, _ = np.linalg.lstsq(A, y, rcond=None)
    if rank < A.shape[1]:
        raise DegenerateDesignError("degenerate design matrix")
    return coeffs


def loss_m4(curve: LearningCurve, p: M4Params) -> float:
    """Mean squared residual of the M4 square-log loss.

    residual_i = log(eps_i - eps_inf) - alpha*log(eps0 - eps_i)
                 - log(beta) - c*log(x_i)
    """
    eps = curve.eps_array
    if np.any(eps <= p.eps_inf):
        raise FitError("eps_inf exceeds observed loss")
    r = (
        np.log(eps - p.eps_inf)
        - p.alpha * np.log(p.eps0 - eps)
        - np.log(p.beta)
        - p.c * np.log(curve.x_array)
    )
    return float(np.mean(r**2))


def loss_m3(curve: LearningCurve, p: M3Params) -> float:
    """Mean of (log eps - log beta - c*log(1/x + gamma))^2."""
    r = (
        np.log(curve.eps_array)
        - np.log(p.beta)
        - p.c * np.log(1.0 / curve.x_array + p.gamma)
    )
    return float(np.mean(r**2))


def dloss_m4_deps_inf(curve: LearningCurve, p: M4Params) -> float:
    """Analytic partial derivative of loss_m4 with respect to eps_inf.

    dL/deps_inf = mean(-2 r_i / (eps_i - eps_inf)) with the other
    parameters held fixed; this is the gradient used by fit_m2 and fit_m4.
    """
    eps = curve.eps_array
    if np.any(eps <= p.eps_inf):
        raise FitError("eps_inf exceeds observed loss")
    r = (
        np.log(eps - p.eps_inf)
        - p.alpha * np.log(p.eps0 - eps)
        - np.log(p.beta)
        - p.c * np.log(curve.x_array)
    )
    return float(np.mean(2.0 * r * (-1.0 / (eps - p.eps_inf))))


def dloss_m3_dgamma(curve: LearningCurve, p: M3Params) -> float:
    """Analytic partial derivative of loss_m3 with respect to gamma,
    dL/dgamma = mean(-2 r_i c / (1/x_i + gamma))."""
    inv_x = 1.0 / curve.x_array
    r = np.log(curve.eps_array) - np.log(p.beta) - p.c * np.log(inv_x + p.gamma)
    return float(np.mean(2.0 * r * (-p.c / (inv_x + p.gamma))))


def _require_points(curve, n, model):
    if len(curve) < n:
        raise FitError(f"{model} needs at least {n} points, got {len(curve)}")


def fit_m1(curve: LearningCurve) -> FitResult:
    """Closed-form least squares of log eps on (1, log x)."""
    _require_points(curve, 2, "M1")
    logx = np.log(curve.x_array)
    y = np.log(curve.eps_array)
    A = np.column_stack([np.ones_like(logx), logx])
    b0, c = solve_loglinear(y, A)
    r = y - A @ (b0, c)
    return FitResult(M1Params(beta=float(np.exp(b0)), c=float(c)),
                     float(np.mean(r**2)), 1, True)


def _descend(solve_block, grad, init, lo, hi, cfg):
    """Generic outer loop: exact log-linear block, then one gradient step
    on the scalar parameter, clamped to [lo, hi].

    solve_block(theta) -> (coeffs, residuals, loss); grad(theta, residuals)
    -> dL/dtheta.  Returns (theta, coeffs, loss, iterations, converged).
    """
    theta = min(max(init, lo), hi)
    rate = cfg.effective_rate
    prev_loss = np.inf
    coeffs, resid, loss = solve_block(theta)
    for k in range(1, cfg.max_outer_iters + 1):
        if not np.isfinite(loss):
            raise FitError("non-finite loss during coordinate descent")
        if prev_loss - loss < cfg.convergence_tol:
            return theta, coeffs, loss, k, True
        prev_loss = loss
        step = rate * grad(theta, resid)
        candidate = min(max(theta - step, lo), hi)
        if cfg.backtracking:
            for _ in range(40):
                c2, r2, l2 = solve_block(candidate)
                if l2 <= loss:
                    break
                step *= 0.5
                candidate = min(max(theta - step, lo), hi)
            else:
                return theta, coeffs, loss, k, True
            theta, coeffs, resid, loss = candidate, c2, r2, l2
        else:
            theta = candidate
            coeffs, resid, loss = solve_block(theta)
    return theta, coeffs, loss, cfg.max_outer_iters, False


def fit_m2(curve: LearningCurve, cfg: FitConfig = FitConfig()) -> FitResult:
    """Block coordinate descent for eps = eps_inf + beta * x^c.

    Given eps_inf, (log beta, c) is the least-squares fit of
    log(eps - eps_inf) on (1, log x); eps_inf then takes a gradient step
    with dL/deps_inf = mean(-2 r_i / (eps_i - eps_inf)) and is clamped to
    [0, (1 - margin) * min eps].
    """
    _require_points(curve, 3, "M2")
    eps = curve.eps_array
    logx = np.log(curve.x_array)
    A = np.column_stack([np.ones_like(logx), logx])
    hi = (1.0 - cfg.eps_inf_margin) * float(eps.min())

    def solve_block(e_inf):
        y = np.log(eps - e_inf)
        coeffs = solve_loglinear(y, A)
        r = y - A @ coeffs
        return coeffs, r, float(np.mean(r**2))

    def grad(e_inf, r):
        return float(np.mean(2.0 * r * (-1.0 / (eps - e_inf))))

    init = cfg.eps_inf_init_fraction * float(eps.min())
    e_inf, (b0, c), loss, iters, conv = _descend(solve_block, grad, init, 0.0, hi, cfg)
    return FitResult(M2Params(eps_inf=float(e_inf), beta=float(np.exp(b0)), c=float(c)),
                     loss, iters, conv)


def fit_m3(curve: LearningCurve, cfg: FitConfig = FitConfig()) -> FitResult:
    """Block coordinate descent for eps = beta * (1/x + gamma)^c.

    Given gamma, (log beta, c) is the least-squares fit of log eps on
    (1, log(1/x + gamma)); gamma then takes a gradient step with
    dL/dgamma = mean(-2 r_i * c / (1/x_i + gamma)), clamped to gamma >= 0.
    """
    _require_points(curve, 3, "M3")
    inv_x = 1.0 / curve.x_array
    y = np.log(curve.eps_array)
    state = {}

    def solve_block(gamma):
        A = np.column_stack([np.ones_like(inv_x), np.log(inv_x + gamma)])
        coeffs = solve_loglinear(y, A)
        r = y - A @ coeffs
        state["c"] = coeffs[1]
        return coeffs, r, float(np.mean(r**2))

    def grad(gamma, r):
        return float(np.mean(2.0 * r * (-state["c"] / (inv_x + gamma))))

    gamma, (b0, c), loss, iters, conv = _descend(
        solve_block, grad, cfg.gamma_init, 0.0, np.inf, cfg
    )
    return FitResult(M3Params(beta=float(np.exp(b0)), c=float(c), gamma=float(gamma)),
                     loss, iters, conv)


def fit_m4(curve: LearningCurve, cfg: FitConfig = FitConfig(),
           fix_alpha_zero: bool = False) -> FitResult:
    """Block coordinate descent for (eps - eps_inf)/(eps0 - eps)^alpha = beta x^c.

    eps0 is fixed to curve.eps0.  Given eps_inf, (alpha, log beta, c) is the
    least-squares fit of log(eps - eps_inf) on (log(eps0 - eps), 1, log x);
    a negative alpha is projected to zero by re-solving with the alpha
    feature dropped.  eps_inf takes the same gradient step as in fit_m2.
    fix_alpha_zero drops the alpha feature throughout (the no-alpha
    ablation variant).
    """
    _require_points(curve, 3 if fix_alpha_zero else 4, "M4")
    eps = curve.eps_array
    eps0 = curve.eps0
    logx = np.log(curve.x_array)
    ones = np.ones_like(logx)
    log_gap = np.log(eps0 - eps)
    hi = (1.0 - cfg.eps_inf_margin) * float(eps.min())

    def solve_block(e_inf):
        y = np.log(eps - e_inf)
        if fix_alpha_zero:
            A = np.column_stack([ones, logx])
            b0, c = solve_loglinear(y, A)
            alpha = 0.0
            r = y - A @ (b0, c)
        else:
            A = np.column_stack([log_gap, ones, logx])
            alpha, b0, c = solve_loglinear(y, A)
            if alpha < 0:
                # active-set projection: re-solve with the alpha feature dropped
                alpha = 0.0
                A2 = np.column_stack([ones, logx])
                b0, c = solve_loglinear(y, A2)
                r = y - A2 @ (b0, c)
            else:
                r = y - A @ (alpha, b0, c)
        return (alpha, b0, c), r, float(np.mean(r**2))

    def grad(e_inf, r):
        return float(np.mean(2.0 * r * (-1.0 / (eps - e_inf))))

    init = cfg.eps_inf_init_fraction * float(eps.min())
    e_inf, (alpha, b0, c), loss, iters, conv = _descend(
        solve_block, grad, init, 0.0, hi, cfg
    )
    params = M4Params(eps0=float(eps0), eps_inf=float(e_inf), alpha=float(alpha),
                      beta=float(np.exp(b0)), c=float(c))
    return FitResult(params, loss, iters, conv)
