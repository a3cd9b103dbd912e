"""Slot store: versioned persistence, scoring, concurrency rules."""

import json
import os
import threading

import pytest

from archmat.errors import (InvalidArgumentError, SlotConflictError,
                            UnknownLabelError, UnknownSlotError)
from archmat.registry import (MIN_TRAIN_ROWS, ModelRegistry, check_slot_name,
                              train_record)
from archmat.dataset import Dataset


def test_slot_name_rules():
    for good in ("default", "main-2", "A_b", "x" * 64):
        assert check_slot_name(good) == good
    for bad in ("", "a b", "a/b", "x" * 65, "dot.dot"):
        with pytest.raises(InvalidArgumentError):
            check_slot_name(bad)


def test_train_predict_and_versioning(tmp_path, data):
    reg = ModelRegistry(str(tmp_path))
    rec1 = reg.train("main", "cart", seed=0, dataset=data)
    assert rec1.version == 1
    assert rec1.kind == "cart"
    value, rec = reg.predict("main", "Octet", 0.3, 208.0, 0.28, 9.7)
    assert rec.version == 1
    assert value > 0.0

    rec2 = reg.train("main", "gbm", seed=1, dataset=data)
    assert rec2.version == 2
    assert sorted(os.listdir(tmp_path)) == ["main.v1.json", "main.v2.json"]
    assert reg.get("main").kind == "gbm"


def test_persistence_across_restart(tmp_path, data):
    reg = ModelRegistry(str(tmp_path))
    reg.train("slot-a", "regularized", seed=7, dataset=data)
    first = reg.predict("slot-a", "Simple Cubic", 0.5, 208.0, 0.28, 9.7)[0]

    again = ModelRegistry(str(tmp_path))
    second = again.predict("slot-a", "Simple Cubic", 0.5, 208.0, 0.28, 9.7)[0]
    assert second == first
    assert again.get("slot-a").version == 1
    # Old versions on disk are superseded by the highest version.
    again.train("slot-a", "cart", seed=0, dataset=data)
    third = ModelRegistry(str(tmp_path))
    assert third.get("slot-a").version == 2
    assert third.get("slot-a").kind == "cart"


def test_slot_records_are_valid_json(tmp_path, data):
    reg = ModelRegistry(str(tmp_path))
    reg.train("main", "ordered", seed=3, dataset=data)
    with open(tmp_path / "main.v1.json", encoding="utf-8") as fh:
        doc = json.load(fh)
    assert doc["slot"] == "main"
    assert doc["version"] == 1
    assert doc["kind"] == "ordered"
    assert doc["seed"] == 3
    assert set(doc["metrics"]) == {"mse", "mae", "r2"}
    assert "model" in doc and "preprocess" in doc and "diagnostics" in doc
    assert doc["created_at"].endswith("+00:00")


def test_unknown_slot(tmp_path):
    reg = ModelRegistry(str(tmp_path))
    with pytest.raises(UnknownSlotError):
        reg.get("nope")
    with pytest.raises(UnknownSlotError):
        reg.predict("nope", "Octet", 0.3, 208.0, 0.28, 9.7)


def test_predict_validates_inputs(tmp_path, data):
    reg = ModelRegistry(str(tmp_path))
    reg.train("main", "cart", seed=0, dataset=data)
    with pytest.raises(UnknownLabelError) as err:
        reg.predict("main", "Cuboid", 0.3, 208.0, 0.28, 9.7)
    assert "Simple Cubic" in str(err.value)
    with pytest.raises(InvalidArgumentError):
        reg.predict("main", "Octet", -0.1, 208.0, 0.28, 9.7)
    with pytest.raises(InvalidArgumentError):
        reg.predict("main", "Octet", 0.3, float("nan"), 0.28, 9.7)
    with pytest.raises(InvalidArgumentError):
        reg.predict("main", "Octet", 0.3, 208.0, "soft", 9.7)


def test_minimum_row_requirement(tmp_path, data):
    reg = ModelRegistry(str(tmp_path))
    tiny = Dataset(rows=tuple(data.rows[:MIN_TRAIN_ROWS - 1]))
    with pytest.raises(InvalidArgumentError):
        reg.train("main", "cart", seed=0, dataset=tiny)


def test_concurrent_training_conflicts(tmp_path, data):
    reg = ModelRegistry(str(tmp_path))
    lock = reg._training_lock("busy")
    assert lock.acquire(blocking=False)
    try:
        with pytest.raises(SlotConflictError):
            reg.train("busy", "cart", seed=0, dataset=data)
    finally:
        lock.release()
    # Released lock trains normally again.
    assert reg.train("busy", "cart", seed=0, dataset=data).version == 1


def test_parallel_training_different_slots(tmp_path, data):
    reg = ModelRegistry(str(tmp_path))
    errors = []

    def work(slot):
        try:
            reg.train(slot, "cart", seed=0, dataset=data)
        except Exception as exc:      # noqa: BLE001 - collected for assert
            errors.append(exc)

    threads = [threading.Thread(target=work, args=(f"s{i}",))
               for i in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    assert len(reg.slots()) == 4


def test_train_record_is_self_contained(data):
    record = train_record("solo", "extra_trees", None, 4, data, version=9)
    assert record.version == 9
    doc = record.to_json_dict()
    from archmat.registry import SlotRecord
    again = SlotRecord.from_json_dict(doc)
    assert again.metrics == record.metrics
    assert again.state.label_codes == record.state.label_codes
    assert len(again.diagnostics.pairs) == 22
