"""Regression metrics, residual diagnostics, and the multi-seed leaderboard.

Everything here is a pure function of its inputs.  The leaderboard runs
the full split/preprocess/fit/evaluate pipeline for each of the five
model kinds across a seed set and aggregates per-metric medians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .dataset import (
    FEATURE_NAMES,
    Dataset,
    apply_preprocess,
    fit_preprocess,
    train_test_split,
    _format_number,
)
from .errors import DegenerateTargetError, InvalidArgumentError
from .models import (
    MODEL_KINDS,
    ModelConfig,
    default_config,
    fit_model,
    model_importances,
    predict_model,
)


@dataclass(frozen=True)
class MetricsReport:
    """Held-out regression quality: mse (GPa^2), mae (GPa), r2."""

    mse: float
    mae: float
    r2: float

    def to_json_dict(self) -> dict:
        return {"mse": self.mse, "mae": self.mae, "r2": self.r2}

    @classmethod
    def from_json_dict(cls, d: dict) -> "MetricsReport":
        return cls(mse=float(d["mse"]), mae=float(d["mae"]),
                   r2=float(d["r2"]))


def _vector(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise InvalidArgumentError(f"{name} must be one-dimensional")
    return arr


def compute_metrics(actual, predicted) -> MetricsReport:
    """MSE, MAE, and R^2 = 1 - SS_res/SS_tot about the mean of `actual`.

    A constant `actual` vector makes SS_tot vanish; by convention a
    perfect fit then scores r2 = 0, anything else is rejected rather
    than returning NaN or -inf.
    """
    a = _vector(actual, "actual")
    p = _vector(predicted, "predicted")
    if len(a) == 0 or len(a) != len(p):
        raise InvalidArgumentError(
            f"actual and predicted must have equal nonzero lengths "
            f"(got {len(a)} and {len(p)})"
        )
    err = a - p
    mse = float(np.mean(err * err))
    mae = float(np.mean(np.abs(err)))
    ss_res = float(np.sum(err * err))
    ss_tot = float(np.sum((a - np.mean(a)) ** 2))
    if ss_tot == 0.0:
        if ss_res == 0.0:
            return MetricsReport(mse, mae, 0.0)
        raise DegenerateTargetError(
            "actual values are constant but residuals are not zero; "
            "R^2 is undefined"
        )
    return MetricsReport(mse, mae, 1.0 - ss_res / ss_tot)


# Inverse standard normal CDF, Wichura's algorithm AS 241 (PPND16): a
# minimax rational fit on the central region |p - 1/2| <= 0.425 plus two
# tail fits in sqrt(-log r).  Absolute error is below 1e-15, comfortably
# inside the 1e-9 contract, with no special-function dependency.
_PPND_A = (
    3.3871328727963666080e0, 1.3314166789178437745e2,
    1.9715909503065514427e3, 1.3731693765509461125e4,
    4.5921953931549871457e4, 6.7265770927008700853e4,
    3.3430575583588128105e4, 2.5090809287301226727e3,
)
_PPND_B = (
    1.0, 4.2313330701600911252e1,
    6.8718700749205790830e2, 5.3941960214247511077e3,
    2.1213794301586595867e4, 3.9307895800092710610e4,
    2.8729085735721942674e4, 5.2264952788528545610e3,
)
_PPND_C = (
    1.42343711074968357734e0, 4.63033784615654529590e0,
    5.76949722146069140550e0, 3.64784832476320460504e0,
    1.27045825245236838258e0, 2.41780725177450611770e-1,
    2.27238449892691845833e-2, 7.74545014278341407640e-4,
)
_PPND_D = (
    1.0, 2.05319162663775882187e0,
    1.67638483018380384940e0, 6.89767334985100004550e-1,
    1.48103976427480074590e-1, 1.51986665636164571966e-2,
    5.47593808499534494600e-4, 1.05075007164441684324e-9,
)
_PPND_E = (
    6.65790464350110377720e0, 5.46378491116411436990e0,
    1.78482653991729133580e0, 2.96560571828504891230e-1,
    2.65321895265761230930e-2, 1.24266094738807843860e-3,
    2.71155556874348757815e-5, 2.01033439929228813265e-7,
)
_PPND_F = (
    1.0, 5.99832206555887937690e-1,
    1.36929880922735805310e-1, 1.48753612908506148525e-2,
    7.86869131145613259100e-4, 1.84631831751005468180e-5,
    1.42151175831644588870e-7, 2.04426310338993978564e-15,
)


def _poly(coeffs, x: float) -> float:
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def normal_quantile(p: float) -> float:
    """Quantile function of the standard normal distribution on (0, 1)."""
    if not 0.0 < p < 1.0:
        raise InvalidArgumentError("quantile argument must lie in (0, 1)")
    q = p - 0.5
    if abs(q) <= 0.425:
        r = 0.180625 - q * q
        return q * _poly(_PPND_A, r) / _poly(_PPND_B, r)
    r = p if q < 0.0 else 1.0 - p
    s = math.sqrt(-math.log(r))
    if s <= 5.0:
        s -= 1.6
        z = _poly(_PPND_C, s) / _poly(_PPND_D, s)
    else:
        s -= 5.0
        z = _poly(_PPND_E, s) / _poly(_PPND_F, s)
    return -z if q < 0.0 else z


def qq_points(residuals) -> list:
    """Normal Q-Q pairs (theoretical quantile, ordered standardized residual).

    Residuals are centred and scaled by the sample standard deviation
    (ddof=1), sorted ascending, and paired with the normal quantiles at
    plotting positions (i - 0.5)/n.
    """
    r = _vector(residuals, "residuals")
    n = len(r)
    if n < 2:
        raise InvalidArgumentError("Q-Q requires at least two residuals")
    std = float(np.std(r, ddof=1))
    if std == 0.0:
        raise DegenerateTargetError(
            "residuals have zero variance; Q-Q standardization is undefined"
        )
    observed = np.sort((r - np.mean(r)) / std)
    return [
        (normal_quantile((i - 0.5) / n), float(obs))
        for i, obs in zip(range(1, n + 1), observed)
    ]


def pearson_correlation_matrix(columns) -> np.ndarray:
    """Pairwise Pearson r over equal-length columns.

    A constant column correlates 0 with everything else and 1 with
    itself; results are clamped to [-1, 1] against rounding overshoot.
    """
    cols = [_vector(c, f"column {i}") for i, c in enumerate(columns)]
    k = len(cols)
    if k == 0:
        raise InvalidArgumentError("at least one column required")
    n = len(cols[0])
    if n < 2:
        raise InvalidArgumentError("correlation requires at least two rows")
    if any(len(c) != n for c in cols):
        raise InvalidArgumentError("columns must all share one length")
    centred = np.stack(cols)
    centred -= centred.mean(axis=1, keepdims=True)
    cov = centred @ centred.T / (n - 1)
    sd = np.sqrt(np.diag(cov).copy())
    # Normalize rows then columns by the standard deviations and clamp;
    # collinear columns overshoot 1 by rounding and clamp back to 1.
    with np.errstate(divide="ignore", invalid="ignore"):
        out = cov / sd[:, None]
        out /= sd[None, :]
    out = np.clip(out, -1.0, 1.0)
    zero = sd == 0.0
    out[zero, :] = 0.0
    out[:, zero] = 0.0
    np.fill_diagonal(out, 1.0)
    return out


@dataclass(frozen=True)
class DiagnosticsBundle:
    """Chart payloads for a trained model evaluated on its test split."""

    pairs: tuple            # ((actual, predicted), ...)
    residuals: tuple        # actual - predicted, row order preserved
    qq: tuple               # ((theoretical quantile, ordered residual), ...)
    correlation: tuple      # k x k nested tuples over features + target
    importances: tuple      # one weight per feature, sums to 1
    labels: tuple           # column labels for the correlation axes

    def to_json_dict(self) -> dict:
        return {
            "pairs": [list(p) for p in self.pairs],
            "residuals": list(self.residuals),
            "qq": [list(p) for p in self.qq],
            "correlation": [list(row) for row in self.correlation],
            "importances": list(self.importances),
            "labels": list(self.labels),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "DiagnosticsBundle":
        return cls(
            pairs=tuple((float(a), float(p)) for a, p in d["pairs"]),
            residuals=tuple(float(r) for r in d["residuals"]),
            qq=tuple((float(q), float(z)) for q, z in d["qq"]),
            correlation=tuple(
                tuple(float(v) for v in row) for row in d["correlation"]
            ),
            importances=tuple(float(v) for v in d["importances"]),
            labels=tuple(str(s) for s in d["labels"]),
        )


def diagnostics_bundle(features, actual, predicted,
                       importances) -> DiagnosticsBundle:
    """Assemble the five chart payloads from one evaluation pass.

    `features` is the raw-unit encoded matrix (label code + four numeric
    columns) for the same rows as `actual`; the correlation heatmap spans
    those columns plus the target.
    """
    X = np.asarray(features, dtype=float)
    a = _vector(actual, "actual")
    p = _vector(predicted, "predicted")
    if X.ndim != 2 or len(X) != len(a) or len(a) != len(p):
        raise InvalidArgumentError(
            "features, actual, and predicted must cover the same rows"
        )
    residuals = a - p
    columns = [X[:, j] for j in range(X.shape[1])] + [a]
    corr = pearson_correlation_matrix(columns)
    labels = FEATURE_NAMES[:X.shape[1]] + ("target",)
    return DiagnosticsBundle(
        pairs=tuple((float(x), float(y)) for x, y in zip(a, p)),
        residuals=tuple(float(r) for r in residuals),
        qq=tuple(qq_points(residuals)),
        correlation=tuple(tuple(float(v) for v in row) for row in corr),
        importances=tuple(float(v) for v in importances),
        labels=labels,
    )


@dataclass(frozen=True)
class LeaderboardCell:
    """One (model, seed) evaluation; exactly one of metrics/error is set."""

    model: str
    seed: int
    metrics: Optional[MetricsReport] = None
    error: Optional[str] = None


@dataclass(frozen=True)
class LeaderboardEntry:
    model: str
    cells: tuple = ()
    median: Optional[MetricsReport] = None

    def to_json_dict(self) -> dict:
        return {
            "model": self.model,
            "median": self.median.to_json_dict() if self.median else None,
            "seeds": [
                {
                    "seed": c.seed,
                    "metrics": c.metrics.to_json_dict() if c.metrics else None,
                    "error": c.error,
                }
                for c in self.cells
            ],
        }


def evaluate_split(dataset: Dataset, kind: str,
                   config: Optional[ModelConfig] = None,
                   seed: int = 0,
                   test_fraction: float = 0.2):
    """Split, preprocess, fit, and score one model; the shared pipeline.

    Returns (metrics, model, state, test_rows, predictions) so callers
    can keep the fitted artifacts; the leaderboard only uses metrics.
    """
    train_rows, test_rows = train_test_split(dataset, test_fraction, seed)
    state = fit_preprocess(train_rows)
    X_train = apply_preprocess(state, train_rows)
    y_train = np.array([row.target for row in train_rows])
    X_test = apply_preprocess(state, test_rows)
    y_test = np.array([row.target for row in test_rows])
    model = fit_model(kind, X_train, y_train, config, seed=seed)
    predicted = predict_model(model, X_test)
    metrics = compute_metrics(y_test, predicted)
    return metrics, model, state, test_rows, predicted


def model_leaderboard(dataset: Dataset, seeds: Sequence[int],
                      configs: Optional[dict] = None) -> tuple:
    """Run every model kind across the seed set and rank by median R^2.

    `configs` may override the per-kind defaults.  A failing cell records
    its error string and drops out of the medians instead of aborting
    the table.  Entries are ordered by median R^2 descending; kinds with
    no successful cell sort last.
    """
    seeds = [int(s) for s in seeds]
    if not seeds:
        raise InvalidArgumentError("at least one seed required")
    configs = dict(configs or {})
    unknown = sorted(set(configs) - set(MODEL_KINDS))
    if unknown:
        raise InvalidArgumentError(
            "configs given for unknown model kinds: " + ", ".join(unknown)
        )
    entries = []
    for kind in MODEL_KINDS:
        config = configs.get(kind, default_config(kind))
        cells = []
        for seed in seeds:
            try:
                metrics, *_ = evaluate_split(dataset, kind, config, seed)
                cells.append(LeaderboardCell(kind, seed, metrics=metrics))
            except Exception as exc:  # noqa: BLE001 - per-cell isolation
                cells.append(LeaderboardCell(
                    kind, seed, error=f"{type(exc).__name__}: {exc}"
                ))
        scored = [c.metrics for c in cells if c.metrics is not None]
        median = None
        if scored:
            median = MetricsReport(
                mse=float(np.median([m.mse for m in scored])),
                mae=float(np.median([m.mae for m in scored])),
                r2=float(np.median([m.r2 for m in scored])),
            )
        entries.append(LeaderboardEntry(kind, tuple(cells), median))
    entries.sort(key=lambda e: (
        e.median is None,
        -(e.median.r2 if e.median else 0.0),
        e.model,
    ))
    return tuple(entries)


def leaderboard_to_csv(entries) -> str:
    """Flatten leaderboard entries to CSV rows model,seed,mse,mae,r2.

    Seed rows keep the run order; each model closes with a `median` row.
    Failed cells leave their metric columns empty.
    """
    lines = ["model,seed,mse,mae,r2"]
    for entry in entries:
        for cell in entry.cells:
            if cell.metrics is None:
                lines.append(f"{entry.model},{cell.seed},,,")
            else:
                m = cell.metrics
                lines.append(
                    f"{entry.model},{cell.seed},{_format_number(m.mse)},"
                    f"{_format_number(m.mae)},{_format_number(m.r2)}"
                )
        if entry.median is not None:
            m = entry.median
            lines.append(
                f"{entry.model},median,{_format_number(m.mse)},"
                f"{_format_number(m.mae)},{_format_number(m.r2)}"
            )
    return "\n".join(lines) + "\n"
