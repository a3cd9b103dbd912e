"""Regression trees: exhaustive CART and randomized extra-trees.

Both tree kinds share one greedy builder that differs only in how split
thresholds are proposed per feature:

  exhaustive  midpoints between consecutive sorted unique values
  uniform     one uniform random draw in the node's [min, max]

The split score is the reduction in summed squared error (equivalently,
sample-count-weighted variance reduction), which is also what the feature
importances accumulate.  Ties are broken toward the lowest feature index
and then the smallest threshold by iterating candidates in that order and
accepting only strict improvements.  Samples with value <= threshold go
left.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidArgumentError
from .rng import SplitMix64, derive_seed

THRESHOLD_MODES = ("exhaustive", "uniform")


@dataclass(frozen=True)
class TreeConfig:
    max_depth: Optional[int] = 3
    min_samples_split: int = 2
    threshold_mode: str = "exhaustive"
    n_estimators: int = 10

    def __post_init__(self):
        if self.max_depth is not None and self.max_depth < 0:
            raise InvalidArgumentError("max_depth must be >= 0 or None")
        if self.min_samples_split < 2:
            raise InvalidArgumentError("min_samples_split must be >= 2")
        if self.threshold_mode not in THRESHOLD_MODES:
            raise InvalidArgumentError(
                f"threshold_mode must be one of {THRESHOLD_MODES}"
            )
        if self.n_estimators < 1:
            raise InvalidArgumentError("n_estimators must be >= 1")

    def to_json_dict(self) -> dict:
        return {
            "max_depth": self.max_depth,
            "min_samples_split": self.min_samples_split,
            "threshold_mode": self.threshold_mode,
            "n_estimators": self.n_estimators,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "TreeConfig":
        return cls(
            max_depth=d.get("max_depth", 3),
            min_samples_split=int(d.get("min_samples_split", 2)),
            threshold_mode=str(d.get("threshold_mode", "exhaustive")),
            n_estimators=int(d.get("n_estimators", 10)),
        )


@dataclass(frozen=True)
class TreeNode:
    """Binary regression tree node; leaves have feature == -1."""

    feature: int
    threshold: float
    value: float
    count: int
    gain: float
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None

    @property
    def is_leaf(self) -> bool:
        return self.feature < 0

    def to_json_dict(self) -> dict:
        if self.is_leaf:
            return {"type": "leaf", "value": self.value, "count": self.count}
        return {
            "type": "split",
            "feature": self.feature,
            "threshold": self.threshold,
            "count": self.count,
            "gain": self.gain,
            "left": self.left.to_json_dict(),
            "right": self.right.to_json_dict(),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "TreeNode":
        if d["type"] == "leaf":
            return leaf(float(d["value"]), int(d["count"]))
        return cls(
            feature=int(d["feature"]),
            threshold=float(d["threshold"]),
            value=0.0,
            count=int(d["count"]),
            gain=float(d["gain"]),
            left=cls.from_json_dict(d["left"]),
            right=cls.from_json_dict(d["right"]),
        )


def leaf(value: float, count: int) -> TreeNode:
    return TreeNode(feature=-1, threshold=0.0, value=float(value),
                    count=count, gain=0.0)


def _sse(s1: float, s2: float, n: int) -> float:
    """Summed squared error around the mean from power sums."""
    return s2 - s1 * s1 / n


def _exhaustive_candidates(x: np.ndarray):
    """Midpoints between consecutive sorted unique values."""
    u = np.unique(x)
    if len(u) < 2:
        return np.empty(0)
    return (u[:-1] + u[1:]) / 2.0


def _best_split(X, y, mode, rng):
    """Best (reduction, feature, threshold) or None; strict improvements only."""
    n = len(y)
    s1, s2 = float(y.sum()), float((y * y).sum())
    parent = _sse(s1, s2, n)
    best = None
    for f in range(X.shape[1]):
        x = X[:, f]
        if mode == "exhaustive":
            thresholds = _exhaustive_candidates(x)
        else:
            lo, hi = float(x.min()), float(x.max())
            if lo == hi:
                continue
            thresholds = np.array([rng.uniform(lo, hi)])
        for t in thresholds:
            mask = x <= t
            nl = int(mask.sum())
            if nl == 0 or nl == n:
                continue
            yl = y[mask]
            l1 = float(yl.sum())
            l2 = float((yl * yl).sum())
            reduction = parent - _sse(l1, l2, nl) - _sse(s1 - l1, s2 - l2, n - nl)
            if reduction > 0.0 and (best is None or reduction > best[0]):
                best = (reduction, f, float(t))
    return best


def _grow(X, y, depth, config: TreeConfig, rng) -> TreeNode:
    n = len(y)
    mean = float(y.mean())
    if (config.max_depth is not None and depth >= config.max_depth) \
            or n < config.min_samples_split or np.all(y == y[0]):
        return leaf(mean, n)
    found = _best_split(X, y, config.threshold_mode, rng)
    if found is None:
        return leaf(mean, n)
    reduction, f, t = found
    mask = X[:, f] <= t
    return TreeNode(
        feature=f, threshold=t, value=mean, count=n, gain=reduction,
        left=_grow(X[mask], y[mask], depth + 1, config, rng),
        right=_grow(X[~mask], y[~mask], depth + 1, config, rng),
    )


def _check_xy(X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or len(X) != len(y):
        raise InvalidArgumentError("X must be (n, d) and y (n,) with equal n")
    if len(y) == 0:
        raise InvalidArgumentError("cannot fit on zero samples")
    return X, y


def fit_cart(X, y, config: TreeConfig = TreeConfig()) -> TreeNode:
    """Deterministic exhaustive-midpoint regression tree."""
    X, y = _check_xy(X, y)
    cfg = config
    if cfg.threshold_mode != "exhaustive":
        raise InvalidArgumentError("fit_cart requires exhaustive thresholds")
    return _grow(X, y, 0, cfg, rng=None)


def predict_tree(node: TreeNode, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    out = np.empty(len(X))
    idx = np.arange(len(X))
    stack = [(node, idx)]
    while stack:
        nd, rows = stack.pop()
        if len(rows) == 0:
            continue
        if nd.is_leaf:
            out[rows] = nd.value
            continue
        mask = X[rows, nd.feature] <= nd.threshold
        stack.append((nd.left, rows[mask]))
        stack.append((nd.right, rows[~mask]))
    return out


@dataclass(frozen=True)
class ForestModel:
    """Unbagged ensemble of randomized trees; prediction is the tree mean."""

    trees: tuple
    config: TreeConfig = field(default_factory=TreeConfig)


def fit_extra_trees(X, y, config: TreeConfig = TreeConfig(),
                    seed: int = 0) -> ForestModel:
    """Extremely randomized trees on the full dataset (no bootstrap).

    Each tree draws one uniform threshold per feature per node from its
    own SplitMix64 stream derived from (seed, tree index); the best
    (feature, threshold) pair by variance reduction wins.  With
    threshold_mode "exhaustive" every tree degenerates to the CART fit.
    """
    X, y = _check_xy(X, y)
    trees = []
    for t in range(config.n_estimators):
        rng = SplitMix64(derive_seed(seed, t))
        trees.append(_grow(X, y, 0, config, rng))
    return ForestModel(trees=tuple(trees), config=config)


def predict_forest(model: ForestModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    acc = np.zeros(len(X))
    for tree in model.trees:
        acc += predict_tree(tree, X)
    return acc / len(model.trees)


def _accumulate_gains(node: TreeNode, acc: np.ndarray) -> None:
    if node.is_leaf:
        return
    acc[node.feature] += node.gain
    _accumulate_gains(node.left, acc)
    _accumulate_gains(node.right, acc)


def _normalized(acc: np.ndarray) -> np.ndarray:
    total = acc.sum()
    return acc / total if total > 0 else acc


def tree_importances(node: TreeNode, n_features: int) -> np.ndarray:
    """Split-gain importances normalized to sum 1 (zeros if no splits)."""
    acc = np.zeros(n_features)
    _accumulate_gains(node, acc)
    return _normalized(acc)


def forest_importances(model: ForestModel, n_features: int) -> np.ndarray:
    """Average of per-tree normalized importances, renormalized."""
    acc = np.zeros(n_features)
    for tree in model.trees:
        acc += tree_importances(tree, n_features)
    return _normalized(acc)
