"""Named model slots with JSON persistence and concurrency control.

A slot holds one trained model together with everything scoring needs:
the fitted preprocessing state, held-out metrics, diagnostics payloads,
and the training provenance (kind, config, seed).  Slots persist as
versioned JSON files under a configurable directory and reload on
startup, so predictions survive process restarts unchanged.
"""

from __future__ import annotations

import json
import math
import os
import re
import tempfile
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Optional

import numpy as np

from .dataset import (
    Dataset,
    PreprocessState,
    SampleRow,
    apply_preprocess,
    embedded_dataset,
)
from .errors import (
    InvalidArgumentError,
    SlotConflictError,
    UnknownSlotError,
)
from .evaluation import (
    DiagnosticsBundle,
    MetricsReport,
    diagnostics_bundle,
    evaluate_split,
)
from .models import (
    Model,
    ModelConfig,
    config_from_json,
    model_from_json_dict,
    model_importances,
    model_to_json_dict,
    predict_model,
)

MIN_TRAIN_ROWS = 10

_SLOT_NAME = re.compile(r"^[A-Za-z0-9_-]{1,64}$")
_SLOT_FILE = re.compile(r"^(?P<slot>[A-Za-z0-9_-]{1,64})\.v(?P<version>\d+)\.json$")


def check_slot_name(slot: str) -> str:
    if not isinstance(slot, str) or not _SLOT_NAME.match(slot):
        raise InvalidArgumentError(
            "slot names are 1-64 characters of letters, digits, '-' or '_'"
        )
    return slot


@dataclass(frozen=True)
class SlotRecord:
    """One trained model plus the state needed to score and explain it."""

    slot: str
    version: int
    kind: str
    config: ModelConfig
    seed: int
    created_at: str
    metrics: MetricsReport
    state: PreprocessState
    model: Model
    diagnostics: DiagnosticsBundle

    def to_json_dict(self) -> dict:
        return {
            "slot": self.slot,
            "version": self.version,
            "kind": self.kind,
            "config": self.config.to_json_dict(),
            "seed": self.seed,
            "created_at": self.created_at,
            "metrics": self.metrics.to_json_dict(),
            "preprocess": self.state.to_json_dict(),
            "model": model_to_json_dict(self.model),
            "diagnostics": self.diagnostics.to_json_dict(),
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "SlotRecord":
        kind = str(d["kind"])
        return cls(
            slot=str(d["slot"]),
            version=int(d["version"]),
            kind=kind,
            config=config_from_json(kind, d.get("config")),
            seed=int(d["seed"]),
            created_at=str(d.get("created_at", "")),
            metrics=MetricsReport.from_json_dict(d["metrics"]),
            state=PreprocessState.from_json_dict(d["preprocess"]),
            model=model_from_json_dict(d["model"]),
            diagnostics=DiagnosticsBundle.from_json_dict(d["diagnostics"]),
        )


def _validate_predict_inputs(thickness, young_modulus, poisson_ratio,
                             conductivity) -> tuple:
    values = {
        "thickness": thickness,
        "young_modulus": young_modulus,
        "poisson_ratio": poisson_ratio,
        "conductivity": conductivity,
    }
    out = {}
    for name, value in values.items():
        try:
            out[name] = float(value)
        except (TypeError, ValueError) as exc:
            raise InvalidArgumentError(f"{name} must be a number") from exc
        if not math.isfinite(out[name]):
            raise InvalidArgumentError(f"{name} must be finite")
    if out["thickness"] <= 0.0:
        raise InvalidArgumentError("thickness must be positive")
    return (out["thickness"], out["young_modulus"],
            out["poisson_ratio"], out["conductivity"])


def predict_with(model: Model, state: PreprocessState, lattice_type: str,
                 thickness, young_modulus, poisson_ratio,
                 conductivity) -> float:
    """Score one feature row with a fitted model and preprocess state."""
    thickness, young_modulus, poisson_ratio, conductivity = (
        _validate_predict_inputs(thickness, young_modulus, poisson_ratio,
                                 conductivity)
    )
    row = SampleRow(
        lattice_type=str(lattice_type),
        thickness=thickness,
        alloy_young_modulus=young_modulus,
        poisson_ratio=poisson_ratio,
        conductivity=conductivity,
        target=0.0,
    )
    X = apply_preprocess(state, [row])
    return float(predict_model(model, X)[0])


def train_record(slot: str, kind: str, config: Optional[ModelConfig],
                 seed: int, dataset: Optional[Dataset],
                 version: int) -> SlotRecord:
    """Run the split/fit/evaluate pipeline and freeze it as a SlotRecord."""
    check_slot_name(slot)
    dataset = dataset if dataset is not None else embedded_dataset()
    if len(dataset) < MIN_TRAIN_ROWS:
        raise InvalidArgumentError(
            f"training requires at least {MIN_TRAIN_ROWS} rows "
            f"(got {len(dataset)})"
        )
    metrics, model, state, test_rows, predicted = evaluate_split(
        dataset, kind, config, seed
    )
    codes = [state.label_codes[r.lattice_type] for r in test_rows]
    raw_features = np.column_stack([
        codes,
        [r.thickness for r in test_rows],
        [r.alloy_young_modulus for r in test_rows],
        [r.poisson_ratio for r in test_rows],
        [r.conductivity for r in test_rows],
    ])
    diagnostics = diagnostics_bundle(
        raw_features,
        [r.target for r in test_rows],
        predicted,
        model_importances(model, raw_features.shape[1]),
    )
    if config is None:
        config = config_from_json(kind, None)
    return SlotRecord(
        slot=slot,
        version=version,
        kind=kind,
        config=config,
        seed=int(seed),
        created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        metrics=metrics,
        state=state,
        model=model,
        diagnostics=diagnostics,
    )


class ModelRegistry:
    """Thread-safe slot store backed by versioned JSON files.

    Training is exclusive per slot (concurrent train requests on one slot
    conflict instead of queueing); readers always see the last complete
    record because the in-memory swap happens after the file write.
    """

    def __init__(self, directory: str):
        self.directory = str(directory)
        os.makedirs(self.directory, exist_ok=True)
        self._mutex = threading.Lock()
        self._records: dict = {}
        self._train_locks: dict = {}
        self._load_existing()

    def _load_existing(self) -> None:
        latest: dict = {}
        for name in os.listdir(self.directory):
            match = _SLOT_FILE.match(name)
            if not match:
                continue
            slot = match.group("slot")
            version = int(match.group("version"))
            if slot not in latest or version > latest[slot][0]:
                latest[slot] = (version, name)
        for slot, (_, name) in latest.items():
            path = os.path.join(self.directory, name)
            with open(path, "r", encoding="utf-8") as fh:
                record = SlotRecord.from_json_dict(json.load(fh))
            self._records[slot] = record

    def _slot_path(self, slot: str, version: int) -> str:
        return os.path.join(self.directory, f"{slot}.v{version}.json")

    def _write_record(self, record: SlotRecord) -> None:
        payload = json.dumps(record.to_json_dict(), indent=2,
                             sort_keys=True) + "\n"
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(payload)
            os.replace(tmp, self._slot_path(record.slot, record.version))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def slots(self) -> dict:
        with self._mutex:
            return {
                slot: {
                    "version": rec.version,
                    "kind": rec.kind,
                    "seed": rec.seed,
                    "created_at": rec.created_at,
                    "metrics": rec.metrics.to_json_dict(),
                }
                for slot, rec in sorted(self._records.items())
            }

    def get(self, slot: str) -> SlotRecord:
        with self._mutex:
            record = self._records.get(slot)
        if record is None:
            raise UnknownSlotError(
                f"no trained model in slot {slot!r}"
            )
        return record

    def _training_lock(self, slot: str) -> threading.Lock:
        with self._mutex:
            lock = self._train_locks.get(slot)
            if lock is None:
                lock = self._train_locks[slot] = threading.Lock()
            return lock

    def train(self, slot: str, kind: str,
              config: Optional[ModelConfig] = None, seed: int = 0,
              dataset: Optional[Dataset] = None) -> SlotRecord:
        check_slot_name(slot)
        lock = self._training_lock(slot)
        if not lock.acquire(blocking=False):
            raise SlotConflictError(
                f"slot {slot!r} is already being trained"
            )
        try:
            with self._mutex:
                current = self._records.get(slot)
                version = current.version + 1 if current else 1
            record = train_record(slot, kind, config, seed, dataset, version)
            self._write_record(record)
            with self._mutex:
                self._records[slot] = record
            return record
        finally:
            lock.release()

    def predict(self, slot: str, lattice_type: str, thickness,
                young_modulus, poisson_ratio, conductivity):
        """Score one request against a slot; never refits or mutates."""
        record = self.get(slot)
        value = predict_with(
            record.model, record.state, lattice_type, thickness,
            young_modulus, poisson_ratio, conductivity,
        )
        return value, record
