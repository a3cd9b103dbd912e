"""Effective stiffness of architected lattices: physics and surrogates.

The package has two halves. The physics half builds periodic strut
lattices from an 11-topology catalog and homogenizes them with a periodic
frame-element solver. The modeling half trains tree-ensemble surrogates
(single CART, extremely randomized trees, and three gradient-boosting
variants) on a bundled 110-row dataset mapping lattice type, strut
thickness, and alloy properties to the effective Young's modulus, and
serves them over a CLI and a JSON HTTP API.
"""

from .boosting import (AdditiveEnsemble, BoostConfig, ObliviousTree,
                       fit_gradient_boosting, fit_ordered_boosting,
                       fit_regularized_boosting, predict_ensemble)
from .dataset import (CSV_HEADER, FEATURE_NAMES, Dataset, PreprocessState,
                      SampleRow, apply_preprocess, embedded_dataset,
                      fit_preprocess, parse_csv, serialize_csv,
                      train_test_split)
from .errors import (ArchmatError, CsvSchemaError, DegenerateTargetError,
                     DensityError, GeometryError, InvalidArgumentError,
                     MechanismError, NumericalError, SingularStiffnessError,
                     SlotConflictError, UnknownLabelError,
                     UnknownSlotError, UnknownTopologyError)
from .evaluation import (DiagnosticsBundle, LeaderboardEntry, MetricsReport,
                         compute_metrics, diagnostics_bundle, evaluate_split,
                         leaderboard_to_csv, model_leaderboard,
                         normal_quantile, pearson_correlation_matrix,
                         qq_points)
from .homogenization import (INCONEL_625, TI_6AL_4V, EngineeringConstants,
                             HomogenizationResult, Material,
                             effective_stiffness, engineering_constants,
                             homogenize)
from .lattice import (LatticeGraph, TessellationSpec, Topology,
                      build_unit_cell, relative_density, tessellate)
from .models import (MODEL_KINDS, config_from_json, default_config,
                     fit_model, model_from_json_dict, model_to_json_dict,
                     predict_model)
from .registry import ModelRegistry, SlotRecord, predict_with, train_record
from .rng import SplitMix64, derive_seed
from .trees import (ForestModel, TreeConfig, TreeNode, fit_cart,
                    fit_extra_trees, predict_forest, predict_tree)

__version__ = "1.0.0"

__all__ = [
    "AdditiveEnsemble", "ArchmatError", "BoostConfig", "CSV_HEADER",
    "CsvSchemaError", "Dataset", "DegenerateTargetError", "DensityError",
    "DiagnosticsBundle", "EngineeringConstants", "FEATURE_NAMES",
    "ForestModel", "GeometryError", "HomogenizationResult", "INCONEL_625",
    "InvalidArgumentError", "LatticeGraph", "LeaderboardEntry",
    "MODEL_KINDS", "Material", "MechanismError", "MetricsReport",
    "ModelRegistry", "NumericalError", "ObliviousTree", "PreprocessState",
    "SampleRow", "SingularStiffnessError", "SlotConflictError",
    "SlotRecord", "SplitMix64", "TI_6AL_4V", "TessellationSpec",
    "Topology", "TreeConfig", "TreeNode", "UnknownLabelError",
    "UnknownSlotError", "UnknownTopologyError", "apply_preprocess",
    "build_unit_cell", "compute_metrics", "config_from_json",
    "default_config", "derive_seed", "diagnostics_bundle",
    "effective_stiffness", "embedded_dataset", "engineering_constants",
    "evaluate_split", "fit_cart", "fit_extra_trees",
    "fit_gradient_boosting", "fit_model", "fit_ordered_boosting",
    "fit_preprocess", "fit_regularized_boosting", "homogenize",
    "leaderboard_to_csv", "model_from_json_dict", "model_leaderboard",
    "model_to_json_dict", "normal_quantile", "parse_csv",
    "pearson_correlation_matrix", "predict_ensemble", "predict_forest",
    "predict_model", "predict_tree", "predict_with", "qq_points",
    "relative_density", "serialize_csv", "tessellate", "train_record",
    "train_test_split", "__version__",
]
