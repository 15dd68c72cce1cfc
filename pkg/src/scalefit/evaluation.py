"""Extrapolation-error evaluation: log RMSE, per-task model comparison with
ties, and best-fraction ranking across task collections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curve import CurveSplit
from .fitting import FitConfig, FitError, FitResult, fit_m1, fit_m2, fit_m3, fit_m4
from .models import predict

# canonical model names, in reporting order
MODEL_NAMES = ("M1", "M2", "M3", "M4")
ABLATION_NAME = "M4-no-alpha"
ALL_MODEL_NAMES = MODEL_NAMES + (ABLATION_NAME,)


@dataclass(frozen=True)
class TieRule:
    """Two RMSEs tie when |a - b| <= max(abs_tol, rel_tol * min(a, b)).

    The absolute floor covers near-zero RMSEs; the relative band is a
    documented guess at the bolding pattern in published comparison tables,
    not a value taken from any source.
    """

    abs_tol: float = 1e-4
    rel_tol: float = 0.05

    def tie(self, a: float, b: float) -> bool:
        if math.isinf(a) or math.isinf(b):
            return math.isinf(a) and math.isinf(b)
        return abs(a - b) <= max(self.abs_tol, self.rel_tol * min(a, b))


@dataclass(frozen=True)
class ExtrapolationReport:
    task: str
    rmse_by_model: dict
    winners: frozenset
    fitted_exponent_by_model: dict
    diagnostics: dict = field(default_factory=dict)


@dataclass(frozen=True)
class RankSummary:
    best_fraction_by_model: dict


def extrapolation_rmse(predicted, actual) -> float:
    """sqrt(mean((log predicted - log actual)^2)).

    The log makes the metric penalize relative error, so errors at all
    loss scales weigh equally.
    """
    p = np.asarray(predicted, dtype=float)
    a = np.asarray(actual, dtype=float)
    if p.shape != a.shape or p.size == 0:
        raise ValueError("predicted and actual must be nonempty and equal length")
    if np.any(p <= 0) or np.any(a <= 0):
        raise ValueError("all values must be strictly positive")
    return float(np.sqrt(np.mean((np.log(p) - np.log(a)) ** 2)))


def fit_model(name: str, curve, cfg: FitConfig) -> FitResult:
    """Fit one model by canonical name on a training curve."""
    if name == "M1":
        return fit_m1(curve)
    if name == "M2":
        return fit_m2(curve, cfg)
    if name == "M3":
        return fit_m3(curve, cfg)
    if name == "M4":
        return fit_m4(curve, cfg)
    if name == ABLATION_NAME:
        return fit_m4(curve, cfg, fix_alpha_zero=True)
    raise ValueError(f"unknown model name: {name!r}")


def winners_under(rmse_by_model: dict, tie: TieRule) -> frozenset:
    best = min(rmse_by_model.values())
    return frozenset(m for m, v in rmse_by_model.items() if tie.tie(v, best))


def evaluate_task(split: CurveSplit, cfg: FitConfig = FitConfig(),
                  models=MODEL_NAMES, tie: TieRule = TieRule()) -> ExtrapolationReport:
    """Fit each model on the train split and score it on the holdout.

    A model that fails to fit (or predicts a nonpositive loss) scores an
    infinite RMSE with a diagnostic instead of aborting the task, so
    rankings stay total over tasks.
    """
    rmse = {}
    exponent = {}
    diagnostics = {}
    hold_x = split.holdout.x_array
    hold_eps = split.holdout.eps_array
    for name in models:
        try:
            result = fit_model(name, split.train, cfg)
            pred = np.asarray(predict(result.params, hold_x), dtype=float)
            rmse[name] = extrapolation_rmse(pred, hold_eps)
            exponent[name] = result.params.c
        except (FitError, ValueError) as exc:
            rmse[name] = math.inf
            exponent[name] = math.nan
            diagnostics[name] = str(exc)
    return ExtrapolationReport(
        task=split.train.name,
        rmse_by_model=rmse,
        winners=winners_under(rmse, tie),
        fitted_exponent_by_model=exponent,
        diagnostics=diagnostics,
    )


def rank_methods(reports) -> RankSummary:
    """Fraction of tasks in which each model appears among the winners.

    Several models can tie as jointly best in one task, so fractions may
    sum to more than one.
    """
    reports = list(reports)
    if not reports:
        raise ValueError("at least one report required")
    names = []
    for rep in reports:
        for m in rep.rmse_by_model:
            if m not in names:
                names.append(m)
    frac = {
        m: sum(m in rep.winners for rep in reports) / len(reports) for m in names
    }
    return RankSummary(best_fraction_by_model=frac)


def excess_risk_series(curve, eps_inf: float):
    """(x, eps - eps_inf) pairs for log-log excess-risk plotting."""
    if eps_inf < 0:
        raise ValueError("eps_inf must be nonnegative")
    out = []
    for x, e in zip(curve.xs, curve.eps):
        excess = e - eps_inf
        if excess <= 0:
            raise ValueError(f"nonpositive excess at x={x}")
        out.append((x, excess))
    return out
