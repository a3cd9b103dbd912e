"""Embedded lattice stiffness dataset, CSV I/O, and preprocessing.

The dataset has 110 rows: 11 lattice topologies x 5 strut thicknesses
(0.1 to 0.5 mm in a 5 mm cell) x 2 parent alloys, with the measured
effective Young modulus of the architected material as the target.
Decimal strings in the embedded block are authoritative: parsing and
re-serializing them is bit-exact because every value round-trips through
float repr.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CsvSchemaError, InvalidArgumentError, UnknownLabelError
from .lattice import Topology
from .rng import SplitMix64, derive_seed

# Sub-stream id reserved for the split shuffle, so the index permutation
# is decoupled from the trainer streams derived from the same user seed.
SPLIT_STREAM = 35

CSV_HEADER = (
    "Lattice Type,Thickness (mm),Young Modulus of Alloy (GPa),"
    "Poisson Ratio,Conductivity of Alloy (W/m.K),"
    "Young Modulus of Architected Material (GPa)"
)

FEATURE_NAMES = (
    "lattice_code",
    "thickness",
    "alloy_young_modulus",
    "poisson_ratio",
    "conductivity",
)

_EMBEDDED_ROWS = """\
Simple Cubic,0.1,208,0.28,9.7,0.0869701
Simple Cubic,0.2,208,0.28,9.7,0.527124
Simple Cubic,0.3,208,0.28,9.7,1.16401
Simple Cubic,0.4,208,0.28,9.7,2.0176
Simple Cubic,0.5,208,0.28,9.7,3.05216
Octet,0.1,208,0.28,9.7,0.16683
Octet,0.2,208,0.28,9.7,1.03
Octet,0.3,208,0.28,9.7,2.43738
Octet,0.4,208,0.28,9.7,4.48208
Octet,0.5,208,0.28,9.7,7.04384
Triangular Honeycomb,0.1,208,0.28,9.7,17.9893
Triangular Honeycomb,0.2,208,0.28,9.7,40.5554
Triangular Honeycomb,0.3,208,0.28,9.7,48.0243
Triangular Honeycomb,0.4,208,0.28,9.7,55.2025
Triangular Honeycomb,0.5,208,0.28,9.7,53.1677
Re entrant Honeycomb,0.1,208,0.28,9.7,14.5018
Re entrant Honeycomb,0.2,208,0.28,9.7,29.4579
Re entrant Honeycomb,0.3,208,0.28,9.7,38.4636
Re entrant Honeycomb,0.4,208,0.28,9.7,40.8903
Re entrant Honeycomb,0.5,208,0.28,9.7,43.4441
Diamond,0.1,208,0.28,9.7,0.000510052
Diamond,0.2,208,0.28,9.7,0.0123604
Diamond,0.3,208,0.28,9.7,0.0587947
Diamond,0.4,208,0.28,9.7,0.0972955
Diamond,0.5,208,0.28,9.7,0.217339
Body Centred Cubic,0.1,208,0.28,9.7,0.0768271
Body Centred Cubic,0.2,208,0.28,9.7,0.400881
Body Centred Cubic,0.3,208,0.28,9.7,0.950872
Body Centred Cubic,0.4,208,0.28,9.7,1.66866
Body Centred Cubic,0.5,208,0.28,9.7,2.53609
Face Centred Cubic,0.1,208,0.28,9.7,0.0979675
Face Centred Cubic,0.2,208,0.28,9.7,0.602584
Face Centred Cubic,0.3,208,0.28,9.7,1.4032
Face Centred Cubic,0.4,208,0.28,9.7,2.54084
Face Centred Cubic,0.5,208,0.28,9.7,3.88883
Hexagonal Honeycomb,0.1,208,0.28,9.7,11.658
Hexagonal Honeycomb,0.2,208,0.28,9.7,23.2304
Hexagonal Honeycomb,0.3,208,0.28,9.7,29.8872
Hexagonal Honeycomb,0.4,208,0.28,9.7,35.7401
Hexagonal Honeycomb,0.5,208,0.28,9.7,35.2737
Kelvin Cell,0.1,208,0.28,9.7,0.000531771
Kelvin Cell,0.2,208,0.28,9.7,0.0165469
Kelvin Cell,0.3,208,0.28,9.7,0.092296
Kelvin Cell,0.4,208,0.28,9.7,0.307433
Kelvin Cell,0.5,208,0.28,9.7,0.705788
Iso Truss,0.1,208,0.28,9.7,0.151367
Iso Truss,0.2,208,0.28,9.7,0.901676
Iso Truss,0.3,208,0.28,9.7,2.07243
Iso Truss,0.4,208,0.28,9.7,3.68043
Iso Truss,0.5,208,0.28,9.7,5.50209
FCC Foam,0.1,208,0.28,9.7,16.9701
FCC Foam,0.2,208,0.28,9.7,28.2643
FCC Foam,0.3,208,0.28,9.7,30.5209
FCC Foam,0.4,208,0.28,9.7,29.6728
FCC Foam,0.5,208,0.28,9.7,31.8022
Simple Cubic,0.1,138.8,0.342,6.7,0.047599
Simple Cubic,0.2,138.8,0.342,6.7,0.288788
Simple Cubic,0.3,138.8,0.342,6.7,0.637965
Simple Cubic,0.4,138.8,0.342,6.7,1.10666
Simple Cubic,0.5,138.8,0.342,6.7,1.67495
Octet,0.1,138.8,0.342,6.7,0.0913379
Octet,0.2,138.8,0.342,6.7,0.564378
Octet,0.3,138.8,0.342,6.7,1.33652
Octet,0.4,138.8,0.342,6.7,2.45951
Octet,0.5,138.8,0.342,6.7,3.86823
Triangular Honeycomb,0.1,138.8,0.342,6.7,9.84095
Triangular Honeycomb,0.2,138.8,0.342,6.7,22.2262
Triangular Honeycomb,0.3,138.8,0.342,6.7,26.3193
Triangular Honeycomb,0.4,138.8,0.342,6.7,30.2602
Triangular Honeycomb,0.5,138.8,0.342,6.7,29.1769
Re entrant Honeycomb,0.1,138.8,0.342,6.7,7.93576
Re entrant Honeycomb,0.2,138.8,0.342,6.7,16.1398
Re entrant Honeycomb,0.3,138.8,0.342,6.7,21.0905
Re entrant Honeycomb,0.4,138.8,0.342,6.7,22.4164
Re entrant Honeycomb,0.5,138.8,0.342,6.7,23.8383
Diamond,0.1,138.8,0.342,6.7,0.000279763
Diamond,0.2,138.8,0.342,6.7,0.00679377
Diamond,0.3,138.8,0.342,6.7,0.0323304
Diamond,0.4,138.8,0.342,6.7,0.0533401
Diamond,0.5,138.8,0.342,6.7,0.11957
Body Centred Cubic,0.1,138.8,0.342,6.7,0.0420683
Body Centred Cubic,0.2,138.8,0.342,6.7,0.219526
Body Centred Cubic,0.3,138.8,0.342,6.7,0.520995
Body Centred Cubic,0.4,138.8,0.342,6.7,0.914647
Body Centred Cubic,0.5,138.8,0.342,6.7,1.39051
Face Centred Cubic,0.1,138.8,0.342,6.7,0.0536066
Face Centred Cubic,0.2,138.8,0.342,6.7,0.32969
Face Centred Cubic,0.3,138.8,0.342,6.7,0.767773
Face Centred Cubic,0.4,138.8,0.342,6.7,1.39021
Face Centred Cubic,0.5,138.8,0.342,6.7,2.12855
Hexagonal Honeycomb,0.1,138.8,0.342,6.7,6.3807
Hexagonal Honeycomb,0.2,138.8,0.342,6.7,12.7312
Hexagonal Honeycomb,0.3,138.8,0.342,6.7,16.3865
Hexagonal Honeycomb,0.4,138.8,0.342,6.7,19.6004
Hexagonal Honeycomb,0.5,138.8,0.342,6.7,19.3486
Kelvin Cell,0.1,138.8,0.342,6.7,0.000291577
Kelvin Cell,0.2,138.8,0.342,6.7,0.0090961
Kelvin Cell,0.3,138.8,0.342,6.7,0.0508268
Kelvin Cell,0.4,138.8,0.342,6.7,0.169576
Kelvin Cell,0.5,138.8,0.342,6.7,0.389164
Iso Truss,0.1,138.8,0.342,6.7,0.0828692
Iso Truss,0.2,138.8,0.342,6.7,0.494307
Iso Truss,0.3,138.8,0.342,6.7,1.13721
Iso Truss,0.4,138.8,0.342,6.7,2.02136
Iso Truss,0.5,138.8,0.342,6.7,3.02333
FCC Foam,0.1,138.8,0.342,6.7,9.42718
FCC Foam,0.2,138.8,0.342,6.7,15.7062
FCC Foam,0.3,138.8,0.342,6.7,16.9339
FCC Foam,0.4,138.8,0.342,6.7,16.5215
FCC Foam,0.5,138.8,0.342,6.7,17.7296
"""


@dataclass(frozen=True)
class SampleRow:
    """One measurement: lattice configuration plus its effective modulus."""

    lattice_type: str
    thickness: float
    alloy_young_modulus: float
    poisson_ratio: float
    conductivity: float
    target: float


@dataclass(frozen=True)
class Dataset:
    rows: tuple

    def __len__(self) -> int:
        return len(self.rows)

    def target_vector(self) -> np.ndarray:
        return np.array([r.target for r in self.rows], dtype=float)


def _format_number(x: float) -> str:
    """Shortest round-trip decimal; integral values print without '.0'."""
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def parse_csv(text: str) -> Dataset:
    """Parse dataset CSV with the exact documented header and 6 columns."""
    lines = text.splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise CsvSchemaError(
            f"first line must be the exact header: {CSV_HEADER!r}"
        )
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 6:
            raise CsvSchemaError(f"line {lineno}: expected 6 columns, got {len(parts)}")
        label = parts[0]
        try:
            Topology.from_string(label)
        except InvalidArgumentError as exc:
            raise CsvSchemaError(f"line {lineno}: {exc}") from exc
        try:
            values = [float(v) for v in parts[1:]]
        except ValueError as exc:
            raise CsvSchemaError(f"line {lineno}: non-numeric value ({exc})") from exc
        rows.append(SampleRow(label, *values))
    if not rows:
        raise CsvSchemaError("dataset has no data rows")
    return Dataset(rows=tuple(rows))


def serialize_csv(dataset: Dataset) -> str:
    """Inverse of parse_csv; bit-exact on the embedded dataset."""
    lines = [CSV_HEADER]
    for r in dataset.rows:
        lines.append(",".join((
            r.lattice_type,
            _format_number(r.thickness),
            _format_number(r.alloy_young_modulus),
            _format_number(r.poisson_ratio),
            _format_number(r.conductivity),
            _format_number(r.target),
        )))
    return "\n".join(lines) + "\n"


_EMBEDDED_CACHE = None


def embedded_dataset() -> Dataset:
    """The built-in 110-row dataset."""
    global _EMBEDDED_CACHE
    if _EMBEDDED_CACHE is None:
        _EMBEDDED_CACHE = parse_csv(CSV_HEADER + "\n" + _EMBEDDED_ROWS)
    return _EMBEDDED_CACHE


def train_test_split(dataset: Dataset, test_fraction: float = 0.2,
                     seed: int = 0):
    """Deterministic shuffled split; returns (train_rows, test_rows).

    Indices are shuffled by a SplitMix64-driven Fisher-Yates shuffle of the
    given seed; the first round(test_fraction * n) shuffled indices form
    the test set and the remainder the training set, both kept in shuffle
    order.
    """
    n = len(dataset)
    if not 0.0 < test_fraction < 1.0:
        raise InvalidArgumentError("test_fraction must lie in (0, 1)")
    n_test = int(round(test_fraction * n))
    if n_test < 1 or n_test >= n:
        raise InvalidArgumentError(
            f"test_fraction {test_fraction} leaves an empty split for n={n}"
        )
    idx = list(range(n))
    SplitMix64(derive_seed(seed, SPLIT_STREAM)).shuffle(idx)
    test = tuple(dataset.rows[i] for i in idx[:n_test])
    train = tuple(dataset.rows[i] for i in idx[n_test:])
    return train, test


@dataclass(frozen=True)
class PreprocessState:
    """Fitted label encoding and per-column standardization parameters."""

    label_codes: dict
    means: np.ndarray
    stds: np.ndarray

    @property
    def labels(self):
        return tuple(sorted(self.label_codes, key=self.label_codes.get))

    def to_json_dict(self) -> dict:
        return {
            "label_codes": dict(self.label_codes),
            "means": [float(v) for v in self.means],
            "stds": [float(v) for v in self.stds],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "PreprocessState":
        return cls(
            label_codes={str(k): int(v) for k, v in d["label_codes"].items()},
            means=np.array(d["means"], dtype=float),
            stds=np.array(d["stds"], dtype=float),
        )


def _encode(rows, label_codes) -> np.ndarray:
    X = np.empty((len(rows), 5))
    for i, r in enumerate(rows):
        if r.lattice_type not in label_codes:
            raise UnknownLabelError(r.lattice_type, sorted(label_codes))
        X[i] = (label_codes[r.lattice_type], r.thickness,
                r.alloy_young_modulus, r.poisson_ratio, r.conductivity)
    return X


def fit_preprocess(rows) -> PreprocessState:
    """Fit label codes (lexicographic) and z-score parameters on ``rows``.

    Constant columns get std 1 so they standardize to exactly zero.
    """
    if not rows:
        raise InvalidArgumentError("cannot fit preprocessing on zero rows")
    labels = sorted({r.lattice_type for r in rows})
    codes = {lab: i for i, lab in enumerate(labels)}
    X = _encode(rows, codes)
    means = X.mean(axis=0)
    stds = X.std(axis=0)
    stds[stds == 0.0] = 1.0
    return PreprocessState(label_codes=codes, means=means, stds=stds)


def apply_preprocess(state: PreprocessState, rows) -> np.ndarray:
    """Encode and standardize rows with fitted parameters."""
    X = _encode(rows, state.label_codes)
    return (X - state.means) / state.stds
