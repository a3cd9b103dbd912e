"""Boosting trainers: exact hand iterations, regularization, ordering."""

import numpy as np
import pytest

from archmat.boosting import (AdditiveEnsemble, BoostConfig, ObliviousTree,
                              ensemble_importances, fit_gradient_boosting,
                              fit_ordered_boosting, fit_regularized_boosting,
                              predict_ensemble)
from archmat.errors import InvalidArgumentError

TWO_POINTS = (np.array([[0.0], [1.0]]), np.array([0.0, 1.0]))


def test_two_round_hand_iteration_is_exact():
    X, y = TWO_POINTS
    cfg = BoostConfig(n_rounds=2, learning_rate=0.5, max_depth=1)
    model = fit_gradient_boosting(X, y, cfg, seed=0)
    # base 0.5; round 1 fits +-0.5 -> step +-0.25; round 2 halves the rest.
    assert predict_ensemble(model, X).tolist() == [0.125, 0.875]
    assert model.base_score == 0.5
    assert len(model.stages) == 2


def test_unregularized_second_order_equals_first_order():
    X, y = TWO_POINTS
    cfg1 = BoostConfig(n_rounds=2, learning_rate=0.5, max_depth=1)
    cfg2 = BoostConfig(n_rounds=2, learning_rate=0.5, max_depth=1,
                       lambda_=0.0, gamma=0.0)
    a = predict_ensemble(fit_gradient_boosting(X, y, cfg1, seed=0), X)
    b = predict_ensemble(fit_regularized_boosting(X, y, cfg2, seed=0), X)
    assert a.tolist() == b.tolist() == [0.125, 0.875]


def test_unregularized_equality_on_larger_fixture():
    rng = np.random.default_rng(0)
    X = rng.uniform(size=(40, 3))
    y = X[:, 0] * 2.0 + rng.normal(size=40) * 0.1
    cfg1 = BoostConfig(n_rounds=12, learning_rate=0.3, max_depth=2,
                       early_stopping_rounds=0)
    cfg2 = BoostConfig(n_rounds=12, learning_rate=0.3, max_depth=2,
                       lambda_=0.0, gamma=0.0, early_stopping_rounds=0)
    a = predict_ensemble(fit_gradient_boosting(X, y, cfg1, seed=3), X)
    b = predict_ensemble(fit_regularized_boosting(X, y, cfg2, seed=3), X)
    assert np.array_equal(a, b)


def test_learning_rate_shrinks_steps():
    X, y = TWO_POINTS
    slow = fit_gradient_boosting(
        X, y, BoostConfig(n_rounds=1, learning_rate=0.1, max_depth=1), seed=0
    )
    # One round moves 0.1 x (+-0.5) off the 0.5 base.
    assert predict_ensemble(slow, X).tolist() == [0.45, 0.55]


def test_lambda_shrinks_leaf_magnitudes():
    X, y = TWO_POINTS
    plain = fit_regularized_boosting(
        X, y, BoostConfig(n_rounds=1, learning_rate=1.0, max_depth=1,
                          lambda_=0.0, gamma=0.0), seed=0)
    damped = fit_regularized_boosting(
        X, y, BoostConfig(n_rounds=1, learning_rate=1.0, max_depth=1,
                          lambda_=1.0, gamma=0.0), seed=0)
    p_plain = predict_ensemble(plain, X)
    p_damped = predict_ensemble(damped, X)
    # With lambda = 1 each 1-sample leaf weight halves: -G / (n + lambda).
    assert p_plain.tolist() == [0.0, 1.0]
    assert p_damped.tolist() == [0.25, 0.75]


def test_gamma_prunes_all_splits():
    rng = np.random.default_rng(1)
    X = rng.uniform(size=(30, 2))
    y = rng.uniform(size=30)
    cfg = BoostConfig(n_rounds=5, learning_rate=0.5, max_depth=3,
                      lambda_=0.0, gamma=1e9, early_stopping_rounds=0)
    model = fit_regularized_boosting(X, y, cfg, seed=0)
    pred = predict_ensemble(model, X)
    assert np.allclose(pred, model.base_score)


def test_early_stopping_reports_best_iteration():
    rng = np.random.default_rng(2)
    X = rng.uniform(size=(80, 2))
    y = rng.normal(size=80)          # pure noise: validation soon worsens
    cfg = BoostConfig(n_rounds=300, learning_rate=0.5, max_depth=3,
                      early_stopping_rounds=5, validation_fraction=0.2)
    model = fit_regularized_boosting(X, y, cfg, seed=4)
    assert model.validation_rmse is not None
    assert model.best_iteration is not None
    assert model.best_iteration < 300
    assert len(model.stages) == model.best_iteration


def test_no_validation_slice_disables_early_stopping():
    rng = np.random.default_rng(3)
    X = rng.uniform(size=(50, 2))
    y = rng.normal(size=50)
    cfg = BoostConfig(n_rounds=25, learning_rate=0.3, max_depth=2,
                      early_stopping_rounds=0)
    model = fit_gradient_boosting(X, y, cfg, seed=0)
    assert len(model.stages) == 25
    assert model.validation_rmse is None
    assert model.best_iteration == 25


def test_ordered_fitting_is_seed_deterministic():
    rng = np.random.default_rng(4)
    X = rng.uniform(size=(60, 3))
    y = X[:, 0] + 0.5 * X[:, 1] + rng.normal(size=60) * 0.05
    cfg = BoostConfig(n_rounds=30, learning_rate=0.2, max_depth=2,
                      early_stopping_rounds=0)
    grid = rng.uniform(size=(10, 3))
    a = predict_ensemble(fit_ordered_boosting(X, y, cfg, seed=7), grid)
    b = predict_ensemble(fit_ordered_boosting(X, y, cfg, seed=7), grid)
    c = predict_ensemble(fit_ordered_boosting(X, y, cfg, seed=8), grid)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_ordered_stages_are_oblivious():
    rng = np.random.default_rng(5)
    X = rng.uniform(size=(40, 3))
    y = rng.uniform(size=40)
    cfg = BoostConfig(n_rounds=8, learning_rate=0.3, max_depth=3,
                      early_stopping_rounds=0)
    model = fit_ordered_boosting(X, y, cfg, seed=0)
    for _, tree in model.stages:
        assert isinstance(tree, ObliviousTree)
        assert len(tree.levels) <= 3
        assert len(tree.leaves) == 2 ** len(tree.levels)


def test_ordered_fit_learns_signal():
    rng = np.random.default_rng(6)
    X = rng.uniform(size=(100, 2))
    y = 3.0 * X[:, 0]
    # Early stopping matters here: the prequential training path and the
    # stored full-sample leaves drift apart if boosting runs unchecked.
    cfg = BoostConfig(n_rounds=200, learning_rate=0.1, max_depth=2,
                      early_stopping_rounds=20, validation_fraction=0.2)
    model = fit_ordered_boosting(X, y, cfg, seed=1)
    pred = predict_ensemble(model, X)
    rmse = float(np.sqrt(np.mean((pred - y) ** 2)))
    assert rmse < 0.2 * float(np.std(y))


def test_importances_normalized_and_signal_seeking():
    rng = np.random.default_rng(7)
    X = rng.uniform(size=(80, 4))
    y = 5.0 * X[:, 3] + rng.normal(size=80) * 0.01
    cfg = BoostConfig(n_rounds=20, learning_rate=0.3, max_depth=2,
                      early_stopping_rounds=0)
    for fit in (fit_gradient_boosting, fit_regularized_boosting,
                fit_ordered_boosting):
        model = fit(X, y, cfg, seed=0)
        imp = ensemble_importances(model, 4)
        assert imp.shape == (4,)
        assert imp.sum() == pytest.approx(1.0)
        assert imp.argmax() == 3


def test_config_validation_and_json():
    with pytest.raises(InvalidArgumentError):
        BoostConfig(n_rounds=0)
    with pytest.raises(InvalidArgumentError):
        BoostConfig(learning_rate=0.0)
    with pytest.raises(InvalidArgumentError):
        BoostConfig(lambda_=-0.5)
    with pytest.raises(InvalidArgumentError):
        BoostConfig(validation_fraction=1.5)
    cfg = BoostConfig(n_rounds=17, learning_rate=0.05, lambda_=2.5)
    again = BoostConfig.from_json_dict(cfg.to_json_dict())
    assert again == cfg


def test_ensemble_survives_json_round_trip():
    from archmat.models import model_from_json_dict, model_to_json_dict
    rng = np.random.default_rng(8)
    X = rng.uniform(size=(50, 3))
    y = rng.uniform(size=50)
    cfg = BoostConfig(n_rounds=10, learning_rate=0.3, max_depth=2,
                      early_stopping_rounds=0)
    for kind, fit in (("gbm", fit_gradient_boosting),
                      ("regularized", fit_regularized_boosting),
                      ("ordered", fit_ordered_boosting)):
        model = fit(X, y, cfg, seed=2)
        again = model_from_json_dict(model_to_json_dict(model))
        assert isinstance(again, AdditiveEnsemble)
        assert np.array_equal(predict_ensemble(again, X),
                              predict_ensemble(model, X))
