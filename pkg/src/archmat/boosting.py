"""Additive tree boosting: first-order, regularized second-order, ordered.

All three variants fit squared loss and share the update

    y_hat_m = y_hat_{m-1} + learning_rate * tree_m(x),   y_hat_0 = mean(y)

They differ in how tree_m is grown:

  gbm          CART tree on residuals y - y_hat (first-order).
  regularized  second-order gain with gradient g = y_hat - y and unit
               hessian h = 1: a split scores
                 1/2 [G_L^2/(H_L+lambda) + G_R^2/(H_R+lambda)
                      - (G_L+G_R)^2/(H_L+H_R+lambda)] - gamma
               and a leaf weighs -G/(H+lambda).  With lambda = gamma = 0
               this reproduces the first-order trees exactly.
  ordered      oblivious (symmetric) trees: one (feature, threshold) per
               level shared by all nodes, leaf index read off the bit
               pattern of the level comparisons.  During construction the
               leaf statistic applied to sample i comes only from samples
               preceding i in a seeded permutation; the stored leaf values
               use all samples.

When early_stopping_rounds > 0, a validation_fraction slice (seeded,
deterministic) is held out, boosting stops after that many rounds without
an RMSE improvement, and the ensemble is truncated to the best round.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidArgumentError
from .rng import SplitMix64, derive_seed
from .trees import (TreeConfig, TreeNode, _exhaustive_candidates, _sse,
                    fit_cart, leaf, predict_tree)


@dataclass(frozen=True)
class BoostConfig:
    n_rounds: int = 200
    learning_rate: float = 0.1
    max_depth: int = 3
    lambda_: float = 1.0
    gamma: float = 0.0
    early_stopping_rounds: int = 20
    validation_fraction: float = 0.1

    def __post_init__(self):
        if self.n_rounds < 1:
            raise InvalidArgumentError("n_rounds must be >= 1")
        if not 0.0 < self.learning_rate <= 1.0:
            raise InvalidArgumentError("learning_rate must lie in (0, 1]")
        if self.max_depth < 1:
            raise InvalidArgumentError("max_depth must be >= 1")
        if self.lambda_ < 0 or self.gamma < 0:
            raise InvalidArgumentError("lambda_ and gamma must be >= 0")
        if self.early_stopping_rounds < 0:
            raise InvalidArgumentError("early_stopping_rounds must be >= 0")
        if not 0.0 < self.validation_fraction < 1.0:
            raise InvalidArgumentError("validation_fraction must lie in (0, 1)")

    def to_json_dict(self) -> dict:
        return {
            "n_rounds": self.n_rounds,
            "learning_rate": self.learning_rate,
            "max_depth": self.max_depth,
            "lambda_": self.lambda_,
            "gamma": self.gamma,
            "early_stopping_rounds": self.early_stopping_rounds,
            "validation_fraction": self.validation_fraction,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "BoostConfig":
        base = cls()
        return cls(**{k: d.get(k, getattr(base, k)) for k in base.to_json_dict()})


@dataclass(frozen=True)
class ObliviousTree:
    """Depth-k symmetric tree: k shared (feature, threshold) levels.

    Leaf index of x is sum over levels of (x[f_k] > t_k) << k; ``leaves``
    holds 2^k values (0.0 for leaves no training sample reached).
    """

    levels: tuple          # ((feature, threshold), ...)
    leaves: tuple          # 2^len(levels) floats
    counts: tuple          # samples per leaf
    level_gains: tuple     # SSE reduction contributed by each level

    def leaf_index(self, X: np.ndarray) -> np.ndarray:
        idx = np.zeros(len(X), dtype=np.int64)
        for k, (f, t) in enumerate(self.levels):
            idx |= (X[:, f] > t).astype(np.int64) << k
        return idx

    def to_json_dict(self) -> dict:
        return {
            "type": "oblivious",
            "levels": [[int(f), float(t)] for f, t in self.levels],
            "leaves": list(self.leaves),
            "counts": list(self.counts),
            "level_gains": list(self.level_gains),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "ObliviousTree":
        return cls(
            levels=tuple((int(f), float(t)) for f, t in d["levels"]),
            leaves=tuple(float(v) for v in d["leaves"]),
            counts=tuple(int(c) for c in d["counts"]),
            level_gains=tuple(float(g) for g in d["level_gains"]),
        )


@dataclass(frozen=True)
class AdditiveEnsemble:
    """Boosted model: base score plus weighted stage trees."""

    kind: str                      # gbm | regularized | ordered
    base_score: float
    stages: tuple                  # ((weight, TreeNode | ObliviousTree), ...)
    config: BoostConfig = field(default_factory=BoostConfig)
    best_iteration: Optional[int] = None
    validation_rmse: Optional[float] = None


def _predict_stage(tree, X: np.ndarray) -> np.ndarray:
    if isinstance(tree, ObliviousTree):
        return np.array(tree.leaves)[tree.leaf_index(X)]
    return predict_tree(tree, X)


def predict_ensemble(model: AdditiveEnsemble, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    out = np.full(len(X), model.base_score)
    for weight, tree in model.stages:
        out += weight * _predict_stage(tree, X)
    return out


def _validation_split(n: int, config: BoostConfig, seed: int):
    """(fit_idx, val_idx); val empty when early stopping is disabled."""
    if config.early_stopping_rounds == 0:
        return np.arange(n), np.arange(0)
    n_val = int(round(config.validation_fraction * n))
    if n_val < 1 or n - n_val < 1:
        return np.arange(n), np.arange(0)
    idx = list(range(n))
    SplitMix64(derive_seed(seed, 101)).shuffle(idx)
    idx = np.array(idx, dtype=np.int64)
    return idx[n_val:], idx[:n_val]


def _rmse(a: np.ndarray, b: np.ndarray) -> float:
    return math.sqrt(float(np.mean((a - b) ** 2)))


def _boost_loop(X, y, config, seed, make_tree):
    """Shared boosting driver; ``make_tree`` maps residuals to a stage tree."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or len(X) != len(y) or len(y) == 0:
        raise InvalidArgumentError("X must be (n, d) and y (n,), non-empty")
    fit_idx, val_idx = _validation_split(len(y), config, seed)
    Xf, yf = X[fit_idx], y[fit_idx]
    Xv, yv = X[val_idx], y[val_idx]

    base = float(yf.mean())
    pred_f = np.full(len(yf), base)
    pred_v = np.full(len(yv), base)
    stages = []
    best_rmse = _rmse(pred_v, yv) if len(yv) else None
    best_round = 0
    for m in range(config.n_rounds):
        tree, fit_values = make_tree(Xf, yf - pred_f)
        pred_f += config.learning_rate * fit_values
        stages.append((config.learning_rate, tree))
        if len(yv):
            pred_v += config.learning_rate * _predict_stage(tree, Xv)
            rmse = _rmse(pred_v, yv)
            if rmse < best_rmse:
                best_rmse, best_round = rmse, m + 1
            elif (m + 1) - best_round >= config.early_stopping_rounds:
                break
    if len(yv):
        stages = stages[:best_round]
        return base, tuple(stages), best_round, best_rmse
    return base, tuple(stages), len(stages), None


def fit_gradient_boosting(X, y, config: BoostConfig = BoostConfig(),
                          seed: int = 0) -> AdditiveEnsemble:
    """First-order boosting: CART trees on residuals."""
    tree_cfg = TreeConfig(max_depth=config.max_depth)

    def make_tree(Xf, residual):
        tree = fit_cart(Xf, residual, tree_cfg)
        return tree, predict_tree(tree, Xf)

    base, stages, best, rmse = _boost_loop(X, y, config, seed, make_tree)
    return AdditiveEnsemble("gbm", base, stages, config, best, rmse)


def _grow_second_order(X, g, depth, config: BoostConfig) -> TreeNode:
    n = len(g)
    G = float(g.sum())
    lam = config.lambda_
    weight = -G / (n + lam)
    if depth >= config.max_depth or n < 2:
        return leaf(weight, n)
    parent_sim = G * G / (n + lam)
    best = None
    for f in range(X.shape[1]):
        for t in _exhaustive_candidates(X[:, f]):
            mask = X[:, f] <= t
            nl = int(mask.sum())
            if nl == 0 or nl == n:
                continue
            GL = float(g[mask].sum())
            GR = G - GL
            gain = 0.5 * (GL * GL / (nl + lam) + GR * GR / (n - nl + lam)
                          - parent_sim) - config.gamma
            if gain > 0.0 and (best is None or gain > best[0]):
                best = (gain, f, float(t))
    if best is None:
        return leaf(weight, n)
    gain, f, t = best
    mask = X[:, f] <= t
    return TreeNode(
        feature=f, threshold=t, value=weight, count=n, gain=gain,
        left=_grow_second_order(X[mask], g[mask], depth + 1, config),
        right=_grow_second_order(X[~mask], g[~mask], depth + 1, config),
    )


def fit_regularized_boosting(X, y, config: BoostConfig = BoostConfig(),
                             seed: int = 0) -> AdditiveEnsemble:
    """Second-order boosting with L2 leaf regularization and split penalty.

    Gradients for squared loss are g = y_hat - y with unit hessians, so
    leaf weights are -G/(H + lambda); with lambda = gamma = 0 the stages
    coincide with the first-order variant.
    """

    def make_tree(Xf, residual):
        tree = _grow_second_order(Xf, -residual, 0, config)
        return tree, predict_tree(tree, Xf)

    base, stages, best, rmse = _boost_loop(X, y, config, seed, make_tree)
    return AdditiveEnsemble("regularized", base, stages, config, best, rmse)


def _grow_oblivious(X, r, config: BoostConfig, candidates):
    """Greedy symmetric tree structure by total SSE reduction per level."""
    n = len(r)
    leaf_idx = np.zeros(n, dtype=np.int64)
    levels, gains = [], []
    for _ in range(config.max_depth):
        m = 1 << len(levels)
        cnt = np.bincount(leaf_idx, minlength=m).astype(float)
        s1 = np.bincount(leaf_idx, weights=r, minlength=m)
        s2 = np.bincount(leaf_idx, weights=r * r, minlength=m)
        occupied = cnt > 0
        parent_sse = float(np.sum(s2[occupied] - s1[occupied] ** 2 / cnt[occupied]))
        best = None
        for f, thresholds in candidates:
            for t in thresholds:
                key = leaf_idx * 2 + (X[:, f] > t)
                c = np.bincount(key, minlength=2 * m).astype(float)
                b1 = np.bincount(key, weights=r, minlength=2 * m)
                b2 = np.bincount(key, weights=r * r, minlength=2 * m)
                occ = c > 0
                child_sse = float(np.sum(b2[occ] - b1[occ] ** 2 / c[occ]))
                reduction = parent_sse - child_sse
                if reduction > 0.0 and (best is None or reduction > best[0]):
                    best = (reduction, f, float(t))
        if best is None:
            break
        reduction, f, t = best
        leaf_idx = leaf_idx | ((X[:, f] > t).astype(np.int64) << len(levels))
        levels.append((f, t))
        gains.append(reduction)
    return tuple(levels), tuple(gains), leaf_idx


def fit_ordered_boosting(X, y, config: BoostConfig = BoostConfig(),
                         seed: int = 0) -> AdditiveEnsemble:
    """Ordered boosting over oblivious trees with one seeded permutation.

    The residual applied to sample i during construction is the running
    leaf mean over samples that precede i in the permutation (0.0 when
    none do), which removes the target leakage of plain boosting; the
    stored leaves are full-sample means.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or len(X) != len(y) or len(y) == 0:
        raise InvalidArgumentError("X must be (n, d) and y (n,), non-empty")
    fit_idx, val_idx = _validation_split(len(y), config, seed)
    Xf, yf = X[fit_idx], y[fit_idx]
    Xv, yv = X[val_idx], y[val_idx]
    n = len(yf)

    # One seeded stream reshuffles the visit order every round, so no
    # sample sits permanently at the cold head of the permutation.
    perm_rng = SplitMix64(derive_seed(seed, 23))
    order = list(range(n))
    candidates = [(f, _exhaustive_candidates(Xf[:, f])) for f in range(Xf.shape[1])]
    candidates = [(f, th) for f, th in candidates if len(th)]

    base = float(yf.mean())
    pred_f = np.full(n, base)
    pred_v = np.full(len(yv), base)
    stages = []
    best_rmse = _rmse(pred_v, yv) if len(yv) else None
    best_round = 0
    for m in range(config.n_rounds):
        r = yf - pred_f
        levels, gains, leaf_idx = _grow_oblivious(Xf, r, config, candidates)
        n_leaves = 1 << len(levels)
        # Prequential pass: each sample sees only its predecessors' stats.
        perm_rng.shuffle(order)
        run_sum = np.zeros(n_leaves)
        run_cnt = np.zeros(n_leaves, dtype=np.int64)
        ordered_values = np.zeros(n)
        for i in order:
            lf = leaf_idx[i]
            if run_cnt[lf]:
                ordered_values[i] = run_sum[lf] / run_cnt[lf]
            run_sum[lf] += r[i]
            run_cnt[lf] += 1
        full_cnt = np.bincount(leaf_idx, minlength=n_leaves)
        full_sum = np.bincount(leaf_idx, weights=r, minlength=n_leaves)
        leaves = np.divide(full_sum, full_cnt,
                           out=np.zeros(n_leaves), where=full_cnt > 0)
        tree = ObliviousTree(levels, tuple(float(v) for v in leaves),
                             tuple(int(c) for c in full_cnt), gains)
        pred_f += config.learning_rate * ordered_values
        stages.append((config.learning_rate, tree))
        if len(yv):
            pred_v += config.learning_rate * _predict_stage(tree, Xv)
            rmse = _rmse(pred_v, yv)
            if rmse < best_rmse:
                best_rmse, best_round = rmse, m + 1
            elif (m + 1) - best_round >= config.early_stopping_rounds:
                break
    if len(yv):
        stages = stages[:best_round]
        return AdditiveEnsemble("ordered", base, tuple(stages), config,
                                best_round, best_rmse)
    return AdditiveEnsemble("ordered", base, tuple(stages), config,
                            len(stages), None)


def ensemble_importances(model: AdditiveEnsemble, n_features: int) -> np.ndarray:
    """Split gains accumulated over every stage tree, normalized to sum 1."""
    acc = np.zeros(n_features)
    for _, tree in model.stages:
        if isinstance(tree, ObliviousTree):
            for (f, _), gain in zip(tree.levels, tree.level_gains):
                acc[f] += gain
        else:
            stack = [tree]
            while stack:
                nd = stack.pop()
                if not nd.is_leaf:
                    acc[nd.feature] += nd.gain
                    stack.extend((nd.left, nd.right))
    total = acc.sum()
    return acc / total if total > 0 else acc
