"""Task-file ingestion, benchmark running, and report emission.

Task interchange format: one JSON document per task with fields

    name              str
    domain            str
    metric            str
    higher_is_better  bool   (accuracy-style metrics; converted at ingestion)
    loss_random_guess float  (eps0, in error/loss units)
    bayes_risk        float, optional
    points            list of [x, value] pairs

When higher_is_better is true the stored values are accuracies and are
converted to error = 1 - value once at ingestion, so all downstream code
sees losses.  Numbers are serialized at full decimal precision (repr
round-trip).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .curve import CurveError, LearningCurve, apply_cutoff, split_for_extrapolation, truncate_at_peak
from .evaluation import (
    MODEL_NAMES,
    ExtrapolationReport,
    RankSummary,
    TieRule,
    evaluate_task,
    rank_methods,
)
from .fitting import FitConfig, FitResult
from .models import predict


class TaskFormatError(ValueError):
    """A task document violates the interchange schema."""


_REQUIRED_FIELDS = {
    "name": str,
    "domain": str,
    "metric": str,
    "higher_is_better": bool,
    "loss_random_guess": (int, float),
    "points": list,
}


def load_task(source) -> LearningCurve:
    """Parse, convert, and validate a task document.

    source may be a path or an open text stream.  Distinct diagnostics are
    raised for schema violations, nonpositive x, out-of-range values, and
    duplicate x.
    """
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TaskFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise TaskFormatError("task document must be a JSON object")
    for key, typ in _REQUIRED_FIELDS.items():
        if key not in doc:
            raise TaskFormatError(f"missing required field {key!r}")
        value = doc[key]
        ok = isinstance(value, typ)
        if key == "loss_random_guess" and isinstance(value, bool):
            ok = False
        if not ok:
            raise TaskFormatError(f"field {key!r} has wrong type")
    eps0 = float(doc["loss_random_guess"])
    if not eps0 > 0:
        raise TaskFormatError("loss_random_guess must be positive")
    if not doc["points"]:
        raise TaskFormatError("points must be nonempty")

    xs, eps = [], []
    for i, pt in enumerate(doc["points"]):
        if (not isinstance(pt, (list, tuple)) or len(pt) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pt)):
            raise TaskFormatError(f"point {i} must be a [x, value] number pair")
        x, value = float(pt[0]), float(pt[1])
        if x <= 0:
            raise TaskFormatError(f"point {i}: nonpositive x {x}")
        e = 1.0 - value if doc["higher_is_better"] else value
        if not 0 < e < eps0:
            raise TaskFormatError(
                f"point {i}: converted value {e} outside (0, eps0={eps0}); "
                "log(eps0 - eps) would be undefined"
            )
        xs.append(x)
        eps.append(e)
    if len(set(xs)) != len(xs):
        raise TaskFormatError("duplicate x values")
    order = sorted(range(len(xs)), key=lambda i: xs[i])
    try:
        return LearningCurve(
            tuple(xs[i] for i in order), tuple(eps[i] for i in order), eps0,
            name=doc["name"], metric=doc["metric"],
        )
    except CurveError as exc:
        raise TaskFormatError(str(exc)) from exc


def save_task(curve: LearningCurve, path, domain: str = "synthetic",
              bayes_risk: float | None = None) -> None:
    """Write a curve as a task document (loss units, full precision)."""
    doc = {
        "name": curve.name,
        "domain": domain,
        "metric": curve.metric,
        "higher_is_better": False,
        "loss_random_guess": curve.eps0,
        "points": [[x, e] for x, e in zip(curve.xs, curve.eps)],
    }
    if bayes_risk is not None:
        doc["bayes_risk"] = bayes_risk
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


@dataclass(frozen=True)
class BenchmarkRun:
    reports: tuple
    summary: RankSummary
    config: FitConfig
    tie: TieRule
    seed: int | None = None
    skipped: tuple = ()  # (path, diagnostic) pairs


def run_benchmark(task_paths, cfg: FitConfig = FitConfig(), models=MODEL_NAMES,
                  tie: TieRule = TieRule(), truncate_peak: bool = False,
                  cutoff: float = 0.0, seed: int | None = None) -> BenchmarkRun:
    """Split each task at tau = x_max/2, fit, score, and rank.

    cutoff > 0 restricts the train side to x >= cutoff (the holdout is
    always evaluated in full).  Tasks that fail to load or split are
    recorded under skipped rather than aborting; output ordering is by
    task name, independent of input order.
    """
    reports = []
    skipped = []
    for path in task_paths:
        try:
            curve = load_task(path)
            if truncate_peak:
                curve = truncate_at_peak(curve)
            split = split_for_extrapolation(curve)
            if cutoff > 0:
                split = type(split)(
                    train=apply_cutoff(split.train, cutoff),
                    holdout=split.holdout,
                    tau=split.tau,
                )
            reports.append(evaluate_task(split, cfg, models, tie))
        except (OSError, TaskFormatError, CurveError) as exc:
            skipped.append((str(path), str(exc)))
    if not reports:
        raise TaskFormatError("no loadable tasks")
    reports.sort(key=lambda r: r.task)
    return BenchmarkRun(
        reports=tuple(reports),
        summary=rank_methods(reports),
        config=cfg,
        tie=tie,
        seed=seed,
        skipped=tuple(skipped),
    )


def _fmt_rmse(v: float) -> str:
    if math.isinf(v):
        return "inf"
    return f"{v:.1e}"


def emit_report(run: BenchmarkRun, format: str = "table") -> str:
    """Render a benchmark run.

    "table": tab-separated rows per task, RMSEs in scientific notation with
    two significant digits, winners flagged with '*', plus a best-fraction
    summary.  "json": full-precision machine-readable document.
    """
    model_names = list(run.reports[0].rmse_by_model)
    if format == "json":
        doc = {
            "tasks": [
                {
                    "task": rep.task,
                    "rmse": rep.rmse_by_model,
                    "winners": sorted(rep.winners),
                    "fitted_exponent": rep.fitted_exponent_by_model,
                    "diagnostics": rep.diagnostics,
                }
                for rep in run.reports
            ],
            "best_fraction": run.summary.best_fraction_by_model,
            "skipped": [list(s) for s in run.skipped],
            "seed": run.seed,
        }
        return json.dumps(doc, indent=2)
    if format != "table":
        raise ValueError(f"unknown report format: {format!r}")

    lines = ["\t".join(["task"] + model_names)]
    for rep in run.reports:
        cells = [rep.task]
        for m in model_names:
            flag = "*" if m in rep.winners else ""
            cells.append(_fmt_rmse(rep.rmse_by_model[m]) + flag)
        lines.append("\t".join(cells))
    lines.append("")
    lines.append("\t".join(["best_fraction"] +
                           [f"{run.summary.best_fraction_by_model[m]:.3f}"
                            for m in model_names]))
    if run.skipped:
        lines.append("")
        for path, why in run.skipped:
            lines.append(f"skipped\t{path}\t{why}")
    return "\n".join(lines) + "\n"


def emit_plot_data(split, fits: dict, grid_points: int = 50) -> str:
    """Columnar (CSV) data for plotting fits against observed points.

    Rows cover a geometric x grid from the train minimum to the holdout
    maximum with one prediction column per fitted model, plus the observed
    points tagged train/holdout.
    """
    names = list(fits)
    grid = np.geomspace(split.train.xs[0], split.holdout.xs[-1], grid_points)
    preds = {m: np.asarray(predict(fits[m].params, grid), dtype=float) for m in names}

    header = ["x"] + [f"pred_{m}" for m in names] + ["observed", "split"]
    rows = [",".join(header)]
    for i, x in enumerate(grid):
        cells = [repr(float(x))] + [repr(float(preds[m][i])) for m in names] + ["", ""]
        rows.append(",".join(cells))
    for curve, tag in ((split.train, "train"), (split.holdout, "holdout")):
        for x, e in zip(curve.xs, curve.eps):
            cells = [repr(x)] + [""] * len(names) + [repr(e), tag]
            rows.append(",".join(cells))
    return "\n".join(rows) + "\n"
