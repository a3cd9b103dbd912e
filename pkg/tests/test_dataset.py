"""Bundled data fidelity, CSV round-trips, splitting, standardization."""

import numpy as np
import pytest

from archmat.dataset import (CSV_HEADER, FEATURE_NAMES, Dataset,
                             PreprocessState, SampleRow, apply_preprocess,
                             embedded_dataset, fit_preprocess, parse_csv,
                             serialize_csv, train_test_split)
from archmat.errors import CsvSchemaError, UnknownLabelError

ALL_LABELS = (
    "Body Centred Cubic", "Diamond", "FCC Foam", "Face Centred Cubic",
    "Hexagonal Honeycomb", "Iso Truss", "Kelvin Cell", "Octet",
    "Re entrant Honeycomb", "Simple Cubic", "Triangular Honeycomb",
)


def _row_map(dataset):
    return {(r.lattice_type, r.thickness, r.alloy_young_modulus): r.target
            for r in dataset.rows}


def test_embedded_dataset_has_110_rows(data):
    assert len(data) == 110


def test_embedded_spot_values(data):
    rows = _row_map(data)
    assert rows[("Simple Cubic", 0.1, 208.0)] == 0.0869701
    assert rows[("Octet", 0.5, 208.0)] == 7.04384
    assert rows[("Diamond", 0.1, 138.8)] == 0.000279763
    assert rows[("Triangular Honeycomb", 0.5, 208.0)] == 53.1677
    assert rows[("FCC Foam", 0.5, 138.8)] == 17.7296


def test_embedded_dataset_covers_grid(data):
    labels = {r.lattice_type for r in data.rows}
    assert labels == set(ALL_LABELS)
    thicknesses = sorted({r.thickness for r in data.rows})
    assert thicknesses == [0.1, 0.2, 0.3, 0.4, 0.5]
    alloys = {(r.alloy_young_modulus, r.poisson_ratio, r.conductivity)
              for r in data.rows}
    assert alloys == {(208.0, 0.28, 9.7), (138.8, 0.342, 6.7)}


def test_csv_round_trip_is_identity(data):
    text = serialize_csv(data)
    lines = text.strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 111
    again = parse_csv(text)
    assert again.rows == data.rows
    assert serialize_csv(again) == text


def test_parse_csv_rejects_schema_violations():
    good = serialize_csv(embedded_dataset())
    header, first = good.split("\n")[0], good.split("\n")[1]
    with pytest.raises(CsvSchemaError):
        parse_csv("")
    with pytest.raises(CsvSchemaError):
        parse_csv("a,b,c\n1,2,3\n")
    with pytest.raises(CsvSchemaError):
        parse_csv(header + "\n" + first.rsplit(",", 1)[0] + "\n")
    bad_number = first.rsplit(",", 1)[0] + ",abc"
    with pytest.raises(CsvSchemaError):
        parse_csv(header + "\n" + bad_number + "\n")
    with pytest.raises(CsvSchemaError):
        parse_csv(header + "\n")          # no data rows


def test_split_sizes_and_disjointness(data):
    train, test = train_test_split(data, seed=0)
    assert len(test) == 22
    assert len(train) == 88
    ids = lambda rows: {id(r) for r in rows}
    assert not (ids(train) & ids(test))
    merged = sorted(train + test, key=lambda r: (r.lattice_type, r.thickness,
                                                 r.alloy_young_modulus))
    original = sorted(data.rows, key=lambda r: (r.lattice_type, r.thickness,
                                                r.alloy_young_modulus))
    assert merged == original


def test_split_seed_determinism(data):
    a_train, a_test = train_test_split(data, seed=5)
    b_train, b_test = train_test_split(data, seed=5)
    c_train, c_test = train_test_split(data, seed=6)
    assert a_test == b_test and a_train == b_train
    assert a_test != c_test


def test_split_fraction_validation(data):
    with pytest.raises(ValueError):
        train_test_split(data, test_fraction=0.0)
    with pytest.raises(ValueError):
        train_test_split(data, test_fraction=1.0)


def test_label_codes_are_lexicographic(data):
    state = fit_preprocess(data.rows)
    assert state.label_codes == {
        label: code for code, label in enumerate(ALL_LABELS)
    }
    assert tuple(state.labels) == ALL_LABELS


def test_standardization_is_zero_mean_unit_variance(data):
    state = fit_preprocess(data.rows)
    X = apply_preprocess(state, data.rows)
    assert X.shape == (110, 5)
    assert np.abs(X.mean(axis=0)).max() < 1e-12
    assert np.abs(X.std(axis=0) - 1.0).max() < 1e-12


def test_standardization_constant_column_is_safe():
    rows = [SampleRow("Octet", 0.3, 100.0, 0.3, 5.0, float(i))
            for i in range(4)]
    state = fit_preprocess(rows)
    X = apply_preprocess(state, rows)
    assert np.isfinite(X).all()
    # A constant feature maps to zero, not NaN.
    assert np.abs(X[:, 0]).max() == 0.0


def test_unknown_label_raises_with_catalog(data):
    state = fit_preprocess(data.rows)
    bad = [SampleRow("Cuboid", 0.3, 100.0, 0.3, 5.0, 1.0)]
    with pytest.raises(UnknownLabelError) as err:
        apply_preprocess(state, bad)
    message = str(err.value)
    for label in ALL_LABELS:
        assert label in message


def test_preprocess_state_json_round_trip(data):
    state = fit_preprocess(data.rows)
    doc = state.to_json_dict()
    again = PreprocessState.from_json_dict(doc)
    assert again.label_codes == state.label_codes
    assert tuple(again.means) == tuple(state.means)
    assert tuple(again.stds) == tuple(state.stds)


def test_feature_layout():
    assert FEATURE_NAMES == ("lattice_code", "thickness",
                             "alloy_young_modulus", "poisson_ratio",
                             "conductivity")
    assert CSV_HEADER.split(",")[-1] == \
        "Young Modulus of Architected Material (GPa)"


def test_target_vector(data):
    y = data.target_vector()
    assert y.shape == (110,)
    assert y.min() > 0.0
    assert y.max() == 55.2025
