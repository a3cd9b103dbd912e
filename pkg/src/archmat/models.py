"""Model kind registry shared by the leaderboard, CLI, and HTTP service.

Maps the five trainer names onto their fit/predict/importance routines,
carries each kind's default configuration, and defines the portable JSON
model-file layout used for persistence.
"""

from __future__ import annotations

from typing import Optional, Union

import numpy as np

from .boosting import (
    AdditiveEnsemble,
    BoostConfig,
    ObliviousTree,
    ensemble_importances,
    fit_gradient_boosting,
    fit_ordered_boosting,
    fit_regularized_boosting,
    predict_ensemble,
)
from .errors import InvalidArgumentError
from .trees import (
    ForestModel,
    TreeConfig,
    TreeNode,
    fit_cart,
    fit_extra_trees,
    forest_importances,
    predict_forest,
    predict_tree,
    tree_importances,
)

MODEL_KINDS = ("cart", "extra_trees", "gbm", "regularized", "ordered")

MODEL_FORMAT = "archmat-model"
MODEL_FORMAT_VERSION = 1

ModelConfig = Union[TreeConfig, BoostConfig]
Model = Union[TreeNode, ForestModel, AdditiveEnsemble]

_BOOST_FITTERS = {
    "gbm": fit_gradient_boosting,
    "regularized": fit_regularized_boosting,
    "ordered": fit_ordered_boosting,
}


def check_kind(kind: str) -> str:
    if kind not in MODEL_KINDS:
        raise InvalidArgumentError(
            f"unknown model kind {kind!r}; expected one of "
            + ", ".join(MODEL_KINDS)
        )
    return kind


def default_config(kind: str) -> ModelConfig:
    """Per-kind training defaults.  Extra trees grow unbounded."""
    check_kind(kind)
    if kind == "cart":
        return TreeConfig()
    if kind == "extra_trees":
        return TreeConfig(max_depth=None, threshold_mode="uniform")
    return BoostConfig()


def config_from_json(kind: str, payload: Optional[dict] = None) -> ModelConfig:
    """Merge a JSON config override onto the kind's defaults.

    Accepts "lambda" as a spelling for the boosting penalty since bare
    ``lambda`` reads better in request bodies than ``lambda_``.
    """
    base = default_config(kind)
    if not payload:
        return base
    if not isinstance(payload, dict):
        raise InvalidArgumentError("config must be a JSON object")
    payload = dict(payload)
    if isinstance(base, BoostConfig) and "lambda" in payload:
        payload["lambda_"] = payload.pop("lambda")
    fields = base.to_json_dict()
    unknown = sorted(set(payload) - set(fields))
    if unknown:
        raise InvalidArgumentError(
            f"unknown config keys for {kind}: " + ", ".join(unknown)
        )
    fields.update(payload)
    return type(base)(**fields)


def fit_model(kind: str, X, y, config: Optional[ModelConfig] = None,
              seed: int = 0) -> Model:
    check_kind(kind)
    if config is None:
        config = default_config(kind)
    if kind == "cart":
        if not isinstance(config, TreeConfig):
            raise InvalidArgumentError("cart expects a tree config")
        return fit_cart(X, y, config)
    if kind == "extra_trees":
        if not isinstance(config, TreeConfig):
            raise InvalidArgumentError("extra_trees expects a tree config")
        return fit_extra_trees(X, y, config, seed=seed)
    if not isinstance(config, BoostConfig):
        raise InvalidArgumentError(f"{kind} expects a boosting config")
    return _BOOST_FITTERS[kind](X, y, config, seed=seed)


def predict_model(model: Model, X) -> np.ndarray:
    if isinstance(model, TreeNode):
        return predict_tree(model, X)
    if isinstance(model, ForestModel):
        return predict_forest(model, X)
    if isinstance(model, AdditiveEnsemble):
        return predict_ensemble(model, X)
    raise InvalidArgumentError(
        f"unsupported model object {type(model).__name__}"
    )


def model_importances(model: Model, n_features: int) -> np.ndarray:
    if isinstance(model, TreeNode):
        return tree_importances(model, n_features)
    if isinstance(model, ForestModel):
        return forest_importances(model, n_features)
    if isinstance(model, AdditiveEnsemble):
        return ensemble_importances(model, n_features)
    raise InvalidArgumentError(
        f"unsupported model object {type(model).__name__}"
    )


def model_kind(model: Model) -> str:
    if isinstance(model, TreeNode):
        return "cart"
    if isinstance(model, ForestModel):
        return "extra_trees"
    if isinstance(model, AdditiveEnsemble):
        return model.kind
    raise InvalidArgumentError(
        f"unsupported model object {type(model).__name__}"
    )


def model_config(model: Model) -> Optional[ModelConfig]:
    # A bare CART node does not carry its config; callers keep their own.
    if isinstance(model, (ForestModel, AdditiveEnsemble)):
        return model.config
    return None


def model_to_json_dict(model: Model) -> dict:
    kind = model_kind(model)
    out: dict = {"format": MODEL_FORMAT, "version": MODEL_FORMAT_VERSION,
                 "kind": kind}
    if isinstance(model, TreeNode):
        out["tree"] = model.to_json_dict()
    elif isinstance(model, ForestModel):
        out["config"] = model.config.to_json_dict()
        out["trees"] = [t.to_json_dict() for t in model.trees]
    else:
        out["config"] = model.config.to_json_dict()
        out["base_score"] = model.base_score
        out["stages"] = [{"weight": w, "tree": t.to_json_dict()}
                         for w, t in model.stages]
        out["best_iteration"] = model.best_iteration
        out["validation_rmse"] = model.validation_rmse
    return out


def _stage_tree_from_json(d: dict):
    if d.get("type") == "oblivious":
        return ObliviousTree.from_json_dict(d)
    return TreeNode.from_json_dict(d)


def model_from_json_dict(d: dict) -> Model:
    if not isinstance(d, dict) or d.get("format") != MODEL_FORMAT:
        raise InvalidArgumentError(
            f"not a model file (expected format tag {MODEL_FORMAT!r})"
        )
    version = d.get("version")
    if not isinstance(version, int) or version > MODEL_FORMAT_VERSION:
        raise InvalidArgumentError(
            f"unsupported model file version {version!r}"
        )
    kind = check_kind(d.get("kind"))
    try:
        if kind == "cart":
            return TreeNode.from_json_dict(d["tree"])
        if kind == "extra_trees":
            config = TreeConfig.from_json_dict(d.get("config", {}))
            trees = tuple(TreeNode.from_json_dict(t) for t in d["trees"])
            return ForestModel(trees=trees, config=config)
        config = BoostConfig.from_json_dict(d.get("config", {}))
        stages = tuple(
            (float(s["weight"]), _stage_tree_from_json(s["tree"]))
            for s in d["stages"]
        )
        return AdditiveEnsemble(
            kind=kind,
            base_score=float(d["base_score"]),
            stages=stages,
            config=config,
            best_iteration=d.get("best_iteration"),
            validation_rmse=d.get("validation_rmse"),
        )
    except (KeyError, TypeError) as exc:
        raise InvalidArgumentError(
            f"malformed model file: missing or invalid field ({exc})"
        ) from exc
