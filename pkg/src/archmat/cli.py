"""Command-line front door.

Subcommands cover the whole pipeline: ``dataset`` (export the bundled
CSV), ``homogenize`` (solve one unit cell), ``train`` / ``eval`` /
``predict`` (surrogate lifecycle), ``leaderboard`` (multi-seed model
comparison), and ``serve`` (run the HTTP service).

Output is machine-first: JSON on one line, CSV where tabular. ``--pretty``
switches to indented JSON or an aligned table. Commands that take a seed
default to 0. Usage errors exit 2 (argparse); pipeline errors print one
``error: ...`` line on stderr and exit 1.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .dataset import PreprocessState, embedded_dataset, serialize_csv
from .errors import ArchmatError, InvalidArgumentError
from .evaluation import (evaluate_split, leaderboard_to_csv,
                         model_leaderboard)
from .homogenization import Material, homogenize
from .lattice import Topology, build_unit_cell
from .models import MODEL_KINDS, model_from_json_dict, model_to_json_dict
from .registry import ModelRegistry, predict_with

MODEL_FILE_FORMAT = "archmat-model-file"
MODEL_FILE_VERSION = 1


def _dump_json(payload: dict, pretty: bool) -> str:
    if pretty:
        return json.dumps(payload, indent=2, sort_keys=True)
    return json.dumps(payload, sort_keys=True)


def _write_out(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _model_file_doc(kind: str, seed: int, metrics, state, model) -> dict:
    # No timestamps: the same seed must reproduce this file byte for byte.
    return {
        "format": MODEL_FILE_FORMAT,
        "format_version": MODEL_FILE_VERSION,
        "kind": kind,
        "seed": seed,
        "metrics": metrics.to_json_dict(),
        "preprocess": state.to_json_dict(),
        "model": model_to_json_dict(model),
    }


def _load_model_file(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InvalidArgumentError(f"cannot read model file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidArgumentError(
            f"model file {path!r} is not valid JSON"
        ) from exc
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FILE_FORMAT:
        raise InvalidArgumentError(
            f"model file {path!r} lacks the {MODEL_FILE_FORMAT!r} format tag"
        )
    model = model_from_json_dict(doc["model"])
    state = PreprocessState.from_json_dict(doc["preprocess"])
    return model, state


def _parse_seed_list(raw: Optional[str]) -> tuple:
    """Comma-separated seeds; "A..B" is an inclusive range; default 0..19."""
    if raw is None or raw.strip() == "":
        return tuple(range(20))
    seeds = []
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo_text, _, hi_text = part.partition("..")
            try:
                lo, hi = int(lo_text), int(hi_text)
            except ValueError as exc:
                raise InvalidArgumentError(
                    f"bad seed range {part!r}"
                ) from exc
            if hi < lo:
                raise InvalidArgumentError(f"bad seed range {part!r}")
            seeds.extend(range(lo, hi + 1))
        else:
            try:
                seeds.append(int(part))
            except ValueError as exc:
                raise InvalidArgumentError(f"bad seed {part!r}") from exc
    if not seeds:
        raise InvalidArgumentError("seed list is empty")
    return tuple(seeds)


def _pretty_leaderboard(entries) -> str:
    lines = [f"{'model':<14} {'median mse':>12} {'median mae':>12} "
             f"{'median r2':>10}"]
    for entry in entries:
        if entry.median is None:
            lines.append(f"{entry.model:<14} {'-':>12} {'-':>12} {'-':>10}")
            continue
        m = entry.median
        lines.append(f"{entry.model:<14} {m.mse:>12.5f} {m.mae:>12.5f} "
                     f"{m.r2:>10.5f}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="archmat",
        description="Lattice homogenization and stiffness surrogates.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p_data = sub.add_parser("dataset", help="work with the bundled dataset")
    data_sub = p_data.add_subparsers(dest="action", required=True)
    p_export = data_sub.add_parser("export",
                                   help="write the dataset as CSV")
    p_export.add_argument("--out", help="output path (default stdout)")

    p_hom = sub.add_parser("homogenize",
                           help="compute effective stiffness of a unit cell")
    p_hom.add_argument("--topology", required=True,
                       help="lattice label or snake_case name")
    p_hom.add_argument("--thickness", type=float, required=True,
                       help="strut thickness in mm")
    p_hom.add_argument("--cell-size", type=float, default=5.0,
                       help="unit cell edge in mm (default 5)")
    p_hom.add_argument("--E", type=float, required=True,
                       help="parent alloy Young's modulus in GPa")
    p_hom.add_argument("--nu", type=float, required=True,
                       help="parent alloy Poisson ratio")
    p_hom.add_argument("--k", type=float, default=0.0,
                       help="parent alloy conductivity (metadata only)")
    p_hom.add_argument("--dump-graph", action="store_true",
                       help="include unit-cell nodes and struts in the JSON")
    p_hom.add_argument("--pretty", action="store_true")
    p_hom.add_argument("--out", help="output path (default stdout)")

    p_train = sub.add_parser("train", help="fit a surrogate on the dataset")
    p_train.add_argument("--model", required=True, choices=MODEL_KINDS)
    p_train.add_argument("--seed", type=int, default=0)
    p_train.add_argument("--out", help="write a portable model file here")
    p_train.add_argument("--slot",
                         help="also store the model in a registry slot")
    p_train.add_argument("--model-dir", default="./archmat-models",
                         help="registry directory for --slot")
    p_train.add_argument("--pretty", action="store_true")

    p_eval = sub.add_parser("eval",
                            help="train and report held-out metrics")
    p_eval.add_argument("--model", required=True, choices=MODEL_KINDS)
    p_eval.add_argument("--seed", type=int, default=0)
    p_eval.add_argument("--pretty", action="store_true")

    p_pred = sub.add_parser("predict",
                            help="score one design with a trained model")
    p_pred.add_argument("--model-file",
                        help="model file written by train --out")
    p_pred.add_argument("--slot", help="registry slot to score with")
    p_pred.add_argument("--model-dir", default="./archmat-models",
                        help="registry directory for --slot")
    p_pred.add_argument("--topology", required=True,
                        help="lattice label or snake_case name")
    p_pred.add_argument("--thickness", type=float, required=True)
    p_pred.add_argument("--E", type=float, required=True,
                        help="alloy Young's modulus in GPa")
    p_pred.add_argument("--nu", type=float, required=True,
                        help="alloy Poisson ratio")
    p_pred.add_argument("--k", type=float, required=True,
                        help="alloy thermal conductivity")
    p_pred.add_argument("--pretty", action="store_true")

    p_board = sub.add_parser("leaderboard",
                             help="compare all model kinds across seeds")
    p_board.add_argument("--seeds",
                         help="comma list and/or A..B ranges (default 0..19)")
    p_board.add_argument("--out", help="output path (default stdout)")
    p_board.add_argument("--pretty", action="store_true",
                         help="aligned table instead of CSV")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--listen",
                         help="host:port (default env LISTEN_ADDR or "
                              "127.0.0.1:8000)")
    p_serve.add_argument("--model-dir",
                         help="model persistence directory (default env "
                              "MODEL_DIR or ./archmat-models)")

    return parser


def _cmd_dataset(args) -> int:
    _write_out(serialize_csv(embedded_dataset()), args.out)
    return 0


def _cmd_homogenize(args) -> int:
    material = Material(args.E, args.nu, args.k)
    result = homogenize(args.topology, args.thickness, material,
                        cell_size=args.cell_size)
    payload = result.to_json_dict()
    if args.dump_graph:
        cell = build_unit_cell(Topology.from_string(args.topology),
                               args.thickness, args.cell_size)
        payload["graph"] = cell.to_json_dict()
    _write_out(_dump_json(payload, args.pretty), args.out)
    return 0


def _cmd_train(args) -> int:
    dataset = embedded_dataset()
    metrics, model, state, _, _ = evaluate_split(dataset, args.model,
                                                 seed=args.seed)
    if args.out:
        doc = _model_file_doc(args.model, args.seed, metrics, state, model)
        text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    if args.slot:
        registry = ModelRegistry(args.model_dir)
        registry.train(args.slot, args.model, None, args.seed, dataset)
    payload = metrics.to_json_dict()
    payload.update({"kind": args.model, "seed": args.seed})
    _write_out(_dump_json(payload, args.pretty), None)
    return 0


def _cmd_eval(args) -> int:
    metrics, _, _, _, _ = evaluate_split(embedded_dataset(), args.model,
                                         seed=args.seed)
    payload = metrics.to_json_dict()
    payload.update({"kind": args.model, "seed": args.seed})
    _write_out(_dump_json(payload, args.pretty), None)
    return 0


def _cmd_predict(args) -> int:
    label = Topology.from_string(args.topology).label
    if args.model_file:
        model, state = _load_model_file(args.model_file)
        value = predict_with(model, state, label, args.thickness,
                             args.E, args.nu, args.k)
        source = args.model_file
    elif args.slot:
        registry = ModelRegistry(args.model_dir)
        value, record = registry.predict(args.slot, label, args.thickness,
                                         args.E, args.nu, args.k)
        source = f"{record.slot}.v{record.version}"
    else:
        raise InvalidArgumentError(
            "predict needs --model-file or --slot"
        )
    payload = {"predicted_young_modulus": value, "model": source}
    _write_out(_dump_json(payload, args.pretty), None)
    return 0


def _cmd_leaderboard(args) -> int:
    seeds = _parse_seed_list(args.seeds)
    entries = model_leaderboard(embedded_dataset(), seeds)
    if args.pretty:
        _write_out(_pretty_leaderboard(entries), args.out)
    else:
        _write_out(leaderboard_to_csv(entries), args.out)
    return 0


def _cmd_serve(args) -> int:
    from .service import run_server

    run_server(listen_addr=args.listen, model_dir=args.model_dir)
    return 0


_HANDLERS = {
    "dataset": _cmd_dataset,
    "homogenize": _cmd_homogenize,
    "train": _cmd_train,
    "eval": _cmd_eval,
    "predict": _cmd_predict,
    "leaderboard": _cmd_leaderboard,
    "serve": _cmd_serve,
}


def run_command(argv: Sequence[str]) -> int:
    """Parse and execute; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(list(argv))
    handler = _HANDLERS[args.subcommand]
    try:
        return handler(args)
    except ArchmatError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
