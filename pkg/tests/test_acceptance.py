"""End-to-end guarantees, one test per shipped behavior contract.

Covers: embedded dataset fidelity, model quality floors over a 20-seed
survey, exact metric and boosting oracles, homogenization physics across
the full catalog, the service train/predict/restart round trip, and
bit-level determinism of artifacts. Each test measures its wall time
against a stated budget and prints one [PASS]/[FAIL] line with the
observed numbers, so ``pytest -s tests/test_acceptance.py`` reads as a
checklist. Shared heavy work (the model survey, the stiffness sweep)
runs once per module.
"""

import itertools
import json
import statistics
from time import perf_counter

import numpy as np
import pytest
from fastapi.testclient import TestClient

from archmat.boosting import (BoostConfig, fit_gradient_boosting,
                              fit_regularized_boosting, predict_ensemble)
from archmat.cli import run_command
from archmat.dataset import embedded_dataset
from archmat.evaluation import compute_metrics, model_leaderboard
from archmat.homogenization import (INCONEL_625, TI_6AL_4V, Material,
                                    homogenize)
from archmat.lattice import Topology
from archmat.rng import SplitMix64
from archmat.service import create_app

THICKNESSES = (0.1, 0.3, 0.5)
ALLOYS = (("inconel", INCONEL_625), ("titanium", TI_6AL_4V))
# The extruded honeycombs are transversely anisotropic by construction;
# every fully three dimensional cell in the catalog is cubic symmetric.
HONEYCOMBS = {
    Topology.HEXAGONAL_HONEYCOMB,
    Topology.TRIANGULAR_HONEYCOMB,
    Topology.RE_ENTRANT_HONEYCOMB,
}

PROBE_ROW = {
    "lattice_type": "Simple Cubic",
    "thickness": 0.5,
    "young_modulus": 208.0,
    "poisson_ratio": 0.28,
    "conductivity": 9.7,
}
PROBE_TARGET = 3.05216


def _verdict(name, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def survey():
    """Median held-out metrics for every model kind over 20 split seeds."""
    start = perf_counter()
    entries = model_leaderboard(embedded_dataset(), tuple(range(20)))
    elapsed = perf_counter() - start
    medians = {e.model: e.median.r2 for e in entries}
    return medians, elapsed


@pytest.fixture(scope="module")
def sweep():
    """Full catalog stiffness sweep plus doubled-modulus companions."""
    start = perf_counter()
    base, doubled = {}, {}
    for topo, t, (name, mat) in itertools.product(Topology, THICKNESSES,
                                                  ALLOYS):
        key = (topo, t, name)
        base[key] = homogenize(topo.label, t, mat)
        stiffer = Material(2.0 * mat.young_modulus, mat.poisson_ratio,
                           mat.conductivity)
        doubled[key] = homogenize(topo.label, t, stiffer)
    elapsed = perf_counter() - start
    return base, doubled, elapsed


def test_embedded_dataset_matches_published_table():
    start = perf_counter()
    data = embedded_dataset()
    rows = {(r.lattice_type, r.thickness, r.alloy_young_modulus): r.target
            for r in data.rows}
    expected = {
        ("Simple Cubic", 0.1, 208.0): 0.0869701,
        ("Octet", 0.5, 208.0): 7.04384,
        ("Diamond", 0.1, 138.8): 0.000279763,
        ("Triangular Honeycomb", 0.5, 208.0): 53.1677,
        ("FCC Foam", 0.5, 138.8): 17.7296,
    }
    mismatches = [k for k, v in expected.items() if rows.get(k) != v]
    elapsed = perf_counter() - start
    _verdict(
        "dataset fidelity",
        len(data) == 110 and not mismatches and elapsed < 1.0,
        f"{len(data)} rows, {5 - len(mismatches)}/5 spot values exact, "
        f"{elapsed:.2f}s (budget 1s)",
    )


def test_survey_regularized_model_meets_quality_floor(survey):
    medians, elapsed = survey
    r2 = medians["regularized"]
    _verdict(
        "survey floor (regularized)",
        r2 >= 0.90 and elapsed < 60.0,
        f"median r2 {r2:.4f} vs floor 0.90, survey took {elapsed:.1f}s "
        f"(budget 60s)",
    )


def test_survey_regularized_beats_single_tree(survey):
    medians, elapsed = survey
    _verdict(
        "survey ordering (regularized vs cart)",
        medians["regularized"] >= medians["cart"] and elapsed < 60.0,
        f"regularized {medians['regularized']:.4f} >= "
        f"cart {medians['cart']:.4f}",
    )


def test_survey_every_model_clears_common_floor(survey):
    medians, elapsed = survey
    below = {kind: r2 for kind, r2 in medians.items() if r2 <= 0.5}
    listing = ", ".join(f"{k} {v:.4f}" for k, v in sorted(medians.items()))
    _verdict(
        "survey floor (all models)",
        not below and elapsed < 60.0,
        f"medians: {listing}; floor 0.5"
        + ("" if not below else
           f"; below floor: {', '.join(sorted(below))}. A depth-3 single "
           f"tree keeps only ~8 leaves for 11 lattice types x 5 "
           f"thicknesses, so its held-out fit on the 110-row grid stays "
           f"low on most splits; the ensemble models clear the floor."),
    )


def test_error_metrics_match_hand_computed_cases():
    start = perf_counter()
    m = compute_metrics(np.array([1.0, 2.0, 3.0]), np.array([2.0, 2.0, 2.0]))
    exact = (m.mse, m.mae, m.r2) == (2.0 / 3.0, 2.0 / 3.0, 0.0)

    p = compute_metrics(np.array([4.0, 5.0, 6.0]), np.array([4.0, 5.0, 6.0]))
    perfect = (p.mse, p.mae, p.r2) == (0.0, 0.0, 1.0)

    rng = SplitMix64(2024)
    fuzz_ok = True
    for _ in range(1000):
        n = 2 + rng.randrange(30)
        actual = np.array([rng.uniform(-50.0, 50.0) for _ in range(n)])
        pred = np.array([rng.uniform(-50.0, 50.0) for _ in range(n)])
        f = compute_metrics(actual, pred)
        fuzz_ok = fuzz_ok and f.mae**2 <= f.mse + 1e-12
    elapsed = perf_counter() - start
    _verdict(
        "metric oracles",
        exact and perfect and fuzz_ok and elapsed < 1.0,
        f"hand case exact={exact}, perfect fit={perfect}, "
        f"mae^2<=mse on 1000 fuzz vectors={fuzz_ok}, {elapsed:.2f}s "
        f"(budget 1s)",
    )


def test_boosting_reproduces_two_round_hand_trace():
    start = perf_counter()
    X = np.array([[0.0], [1.0]])
    y = np.array([0.0, 1.0])
    cfg = BoostConfig(n_rounds=2, learning_rate=0.5, max_depth=1)
    first = predict_ensemble(fit_gradient_boosting(X, y, cfg, seed=0), X)
    plain_cfg = BoostConfig(n_rounds=2, learning_rate=0.5, max_depth=1,
                            lambda_=0.0, gamma=0.0)
    second = predict_ensemble(
        fit_regularized_boosting(X, y, plain_cfg, seed=0), X)
    elapsed = perf_counter() - start
    _verdict(
        "boosting hand trace",
        first.tolist() == [0.125, 0.875]
        and second.tolist() == first.tolist() and elapsed < 1.0,
        f"first-order {first.tolist()}, unregularized second-order "
        f"{second.tolist()}, {elapsed:.2f}s (budget 1s)",
    )


def test_stiffness_matrices_symmetric_and_stable(sweep):
    base, _, elapsed = sweep
    worst_sym, worst_eig = 0.0, 0.0
    for result in base.values():
        C = np.asarray(result.stiffness)
        scale = np.abs(C).max()
        worst_sym = max(worst_sym, np.abs(C - C.T).max() / scale)
        worst_eig = min(worst_eig, np.linalg.eigvalsh(C).min() / scale)
    _verdict(
        "stiffness symmetry and positive semidefiniteness",
        worst_sym <= 1e-8 and worst_eig >= -1e-8 and elapsed < 120.0,
        f"max asymmetry {worst_sym:.1e} (tol 1e-8), min scaled eigenvalue "
        f"{worst_eig:.1e} (floor -1e-8), sweep took {elapsed:.1f}s "
        f"(budget 120s)",
    )


def test_stiffness_scales_linearly_with_parent_modulus(sweep):
    base, doubled, elapsed = sweep
    worst = 0.0
    for key, result in base.items():
        C1 = np.asarray(result.stiffness)
        C2 = np.asarray(doubled[key].stiffness)
        worst = max(worst, np.abs(C2 - 2.0 * C1).max() / np.abs(C2).max())
    _verdict(
        "stiffness linear in parent modulus",
        worst <= 1e-9 and elapsed < 120.0,
        f"max relative deviation from 2x scaling {worst:.1e} (tol 1e-9)",
    )


def test_three_dimensional_cells_show_cubic_symmetry(sweep):
    base, _, elapsed = sweep
    worst = 0.0
    for (topo, _, _), result in base.items():
        if topo in HONEYCOMBS:
            continue
        C = np.asarray(result.stiffness)
        scale = np.abs(C).max()
        for triple in ((C[0, 0], C[1, 1], C[2, 2]),
                       (C[0, 1], C[0, 2], C[1, 2]),
                       (C[3, 3], C[4, 4], C[5, 5])):
            worst = max(worst, (max(triple) - min(triple)) / scale)
    _verdict(
        "cubic symmetry of three dimensional cells",
        worst <= 1e-6 and elapsed < 120.0,
        f"max in-group spread {worst:.1e} across 8 topologies x 3 "
        f"thicknesses x 2 alloys (tol 1e-6)",
    )


def test_simple_cubic_axial_modulus_matches_truss_formula(sweep):
    base, _, _ = sweep
    worst = 0.0
    for t in THICKNESSES:
        for name, mat in ALLOYS:
            result = base[(Topology.SIMPLE_CUBIC, t, name)]
            area = np.pi * t**2 / 4.0
            oracle = mat.young_modulus * area / result.cell_size**2
            worst = max(worst,
                        abs(result.engineering.ex - oracle) / oracle)
    _verdict(
        "simple cubic axial modulus",
        worst <= 0.15,
        f"max deviation from E*A/L^2 is {worst:.2%} (tol 15%)",
    )


def test_stiffness_density_scaling_exponents(sweep):
    base, _, _ = sweep

    def slope(topo):
        xs = [np.log(base[(topo, t, "inconel")].relative_density)
              for t in THICKNESSES]
        ys = [np.log(base[(topo, t, "inconel")].engineering.ex)
              for t in THICKNESSES]
        return np.polyfit(xs, ys, 1)[0]

    octet = slope(Topology.OCTET)
    diamond = slope(Topology.DIAMOND)
    _verdict(
        "stiffness-density scaling exponents",
        1.0 <= octet <= 1.6 and 1.6 <= diamond <= 2.5,
        f"octet slope {octet:.2f} (window [1.0, 1.6], stretching "
        f"dominated), diamond slope {diamond:.2f} (window [1.6, 2.5], "
        f"bending dominated)",
    )


def test_solver_reproduces_qualitative_stiffness_ordering(sweep):
    base, _, _ = sweep
    ex = {topo: base[(topo, 0.5, "inconel")].engineering.ex
          for topo in (Topology.TRIANGULAR_HONEYCOMB, Topology.OCTET,
                       Topology.DIAMOND)}
    tri = ex[Topology.TRIANGULAR_HONEYCOMB]
    octet = ex[Topology.OCTET]
    diamond = ex[Topology.DIAMOND]
    _verdict(
        "qualitative stiffness ordering at t=0.5",
        tri > octet > diamond,
        f"Ex triangular honeycomb {tri:.3f} > octet {octet:.3f} > "
        f"diamond {diamond:.4f} GPa",
    )


def test_service_round_trip_and_restart(tmp_path):
    start = perf_counter()
    model_dir = str(tmp_path / "models")

    with TestClient(create_app(model_dir=model_dir)) as client:
        r = client.post("/api/train", json={"model": "regularized",
                                            "seed": 7, "slot": "main"})
        assert r.status_code == 200, r.text
        probe = client.post("/api/predict",
                            json=dict(PROBE_ROW, slot="main")).json()

    with TestClient(create_app(model_dir=model_dir)) as reborn:
        again = reborn.post("/api/predict",
                            json=dict(PROBE_ROW, slot="main")).json()

    value = probe["predicted_young_modulus"]
    deviation = abs(value - PROBE_TARGET) / PROBE_TARGET
    elapsed = perf_counter() - start
    _verdict(
        "service round trip",
        deviation < 0.20 and again == probe and elapsed < 10.0,
        f"probe {value:.4f} vs reference {PROBE_TARGET} "
        f"({deviation:.1%}, tol 20%), restart identical={again == probe}, "
        f"{elapsed:.1f}s (budget 10s)",
    )


def test_identical_seeds_reproduce_identical_artifacts(tmp_path, capsys):
    start = perf_counter()
    pairs = []
    for tag in ("a", "b"):
        model_file = tmp_path / f"model_{tag}.json"
        board_file = tmp_path / f"board_{tag}.csv"
        assert run_command(["train", "--model", "regularized", "--seed",
                            "7", "--out", str(model_file)]) == 0
        assert run_command(["leaderboard", "--seeds", "0..2",
                            "--out", str(board_file)]) == 0
        pairs.append((model_file.read_bytes(), board_file.read_bytes()))
    capsys.readouterr()
    elapsed = perf_counter() - start

    models_match = pairs[0][0] == pairs[1][0]
    boards_match = pairs[0][1] == pairs[1][1]
    with capsys.disabled():
        _verdict(
            "artifact determinism",
            models_match and boards_match and elapsed < 60.0,
            f"model files identical={models_match} "
            f"({len(pairs[0][0])} bytes), leaderboard CSVs "
            f"identical={boards_match}, {elapsed:.1f}s (budget 60s)",
        )
