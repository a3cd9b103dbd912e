"""JSON-over-HTTP service: train, score, diagnose, and homogenize.

Endpoints (all JSON unless noted):

  GET  /health                          liveness probe
  GET  /api/dataset                     current dataset as CSV text
  POST /api/dataset                     replace dataset (body: CSV text)
  POST /api/train                       {model, config, seed, slot}
  POST /api/predict                     {slot, lattice_type, thickness,
                                         young_modulus, poisson_ratio,
                                         conductivity}
  GET  /api/diagnostics/{slot}          chart payloads for a trained slot
  GET  /api/leaderboard?seeds=0,1,...   multi-seed model comparison
  GET  /api/homogenize?topology=&thickness=&cell_size=&E=&nu=&k=

Configuration comes from LISTEN_ADDR (default 127.0.0.1:8000) and
MODEL_DIR (default ./archmat-models); a built web client is served from
FRONTEND_DIR (default ./frontend/dist) when that directory exists.
Models persist per slot; scoring never retrains.
"""

from __future__ import annotations

import os
import threading
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .dataset import Dataset, embedded_dataset, parse_csv, serialize_csv
from .errors import (
    ArchmatError,
    CsvSchemaError,
    InvalidArgumentError,
    SlotConflictError,
    UnknownSlotError,
)
from .evaluation import leaderboard_to_csv, model_leaderboard
from .homogenization import Material, homogenize
from .models import config_from_json
from .registry import ModelRegistry

DEFAULT_LISTEN_ADDR = "127.0.0.1:8000"
DEFAULT_MODEL_DIR = "./archmat-models"
DEFAULT_FRONTEND_DIR = "./frontend/dist"
DEFAULT_SLOT = "default"
DEFAULT_LEADERBOARD_SEEDS = tuple(range(20))

_STATUS_BY_ERROR = (
    (UnknownSlotError, 404),
    (SlotConflictError, 409),
    (CsvSchemaError, 400),
    (InvalidArgumentError, 422),
    (ArchmatError, 422),
)


class TrainBody(BaseModel):
    model: str
    config: Optional[dict] = None
    seed: int = 0
    slot: str = DEFAULT_SLOT


class PredictBody(BaseModel):
    slot: str = DEFAULT_SLOT
    lattice_type: str
    thickness: float
    young_modulus: float
    poisson_ratio: float
    conductivity: float


def _error_status(exc: ArchmatError) -> int:
    for klass, status in _STATUS_BY_ERROR:
        if isinstance(exc, klass):
            return status
    return 400


def _parse_seeds(raw: Optional[str]) -> tuple:
    if raw is None or raw.strip() == "":
        return DEFAULT_LEADERBOARD_SEEDS
    seeds = []
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            seeds.append(int(part))
        except ValueError as exc:
            raise InvalidArgumentError(
                f"seeds must be comma-separated integers (bad part {part!r})"
            ) from exc
    if not seeds:
        raise InvalidArgumentError("seeds list is empty")
    return tuple(seeds)


def create_app(model_dir: Optional[str] = None,
               frontend_dir: Optional[str] = None,
               dataset: Optional[Dataset] = None) -> FastAPI:
    """Build the application; separate instances share nothing in memory."""
    model_dir = model_dir or os.environ.get("MODEL_DIR", DEFAULT_MODEL_DIR)
    frontend_dir = frontend_dir or os.environ.get(
        "FRONTEND_DIR", DEFAULT_FRONTEND_DIR
    )
    app = FastAPI(title="archmat", docs_url=None, redoc_url=None)
    app.state.registry = ModelRegistry(model_dir)
    app.state.dataset = dataset if dataset is not None else embedded_dataset()
    app.state.dataset_lock = threading.Lock()

    def _handle_archmat_error(request: Request, exc: ArchmatError):
        return JSONResponse(
            status_code=_error_status(exc), content={"detail": str(exc)}
        )

    app.add_exception_handler(ArchmatError, _handle_archmat_error)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.get("/api/dataset")
    def get_dataset() -> PlainTextResponse:
        with app.state.dataset_lock:
            current = app.state.dataset
        return PlainTextResponse(serialize_csv(current),
                                 media_type="text/csv")

    @app.post("/api/dataset")
    async def post_dataset(request: Request) -> dict:
        body = await request.body()
        try:
            text = body.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise CsvSchemaError("dataset body is not valid UTF-8") from exc
        parsed = parse_csv(text)
        with app.state.dataset_lock:
            app.state.dataset = parsed
        return {"rows": len(parsed)}

    @app.post("/api/train")
    def train(body: TrainBody) -> dict:
        config = config_from_json(body.model, body.config)
        with app.state.dataset_lock:
            current = app.state.dataset
        record = app.state.registry.train(
            body.slot, body.model, config, body.seed, current
        )
        out = record.metrics.to_json_dict()
        out.update({
            "slot": record.slot,
            "model_version": record.version,
            "kind": record.kind,
            "seed": record.seed,
        })
        return out

    @app.post("/api/predict")
    def predict(body: PredictBody) -> dict:
        value, record = app.state.registry.predict(
            body.slot, body.lattice_type, body.thickness,
            body.young_modulus, body.poisson_ratio, body.conductivity,
        )
        return {
            "predicted_young_modulus": value,
            "model": record.slot,
            "model_version": record.version,
        }

    @app.get("/api/diagnostics/{slot}")
    def diagnostics(slot: str) -> dict:
        record = app.state.registry.get(slot)
        out = record.diagnostics.to_json_dict()
        out.update({
            "slot": record.slot,
            "model_version": record.version,
            "kind": record.kind,
            "metrics": record.metrics.to_json_dict(),
        })
        return out

    @app.get("/api/leaderboard")
    def leaderboard(seeds: Optional[str] = None,
                    format: Optional[str] = None):
        seed_list = _parse_seeds(seeds)
        with app.state.dataset_lock:
            current = app.state.dataset
        entries = model_leaderboard(current, seed_list)
        if format == "csv":
            return PlainTextResponse(leaderboard_to_csv(entries),
                                     media_type="text/csv")
        return {
            "seeds": list(seed_list),
            "entries": [entry.to_json_dict() for entry in entries],
        }

    @app.get("/api/homogenize")
    def homogenize_endpoint(topology: str, thickness: float,
                            E: float, nu: float,
                            cell_size: float = 5.0,
                            k: float = 0.0) -> dict:
        try:
            material = Material(E, nu, k)
        except ValueError as exc:
            raise InvalidArgumentError(str(exc)) from exc
        result = homogenize(topology, thickness, material,
                            cell_size=cell_size)
        return result.to_json_dict()

    index = os.path.join(frontend_dir, "index.html")
    if os.path.isfile(index):
        app.mount("/", StaticFiles(directory=frontend_dir, html=True),
                  name="frontend")

    return app


def parse_listen_addr(addr: str) -> tuple:
    """Split "host:port" (IPv6 hosts may be bracketed)."""
    addr = addr.strip()
    if not addr:
        raise InvalidArgumentError("listen address is empty")
    host, sep, port = addr.rpartition(":")
    if not sep:
        raise InvalidArgumentError(
            f"listen address {addr!r} must look like host:port"
        )
    host = host.strip("[]") or "127.0.0.1"
    try:
        port_num = int(port)
    except ValueError as exc:
        raise InvalidArgumentError(
            f"listen address {addr!r} has a non-numeric port"
        ) from exc
    if not 0 < port_num < 65536:
        raise InvalidArgumentError(f"port {port_num} out of range")
    return host, port_num


def run_server(listen_addr: Optional[str] = None,
               model_dir: Optional[str] = None) -> None:
    """Serve the app with uvicorn; blocks until interrupted."""
    import uvicorn

    addr = listen_addr or os.environ.get("LISTEN_ADDR", DEFAULT_LISTEN_ADDR)
    host, port = parse_listen_addr(addr)
    uvicorn.run(create_app(model_dir=model_dir), host=host, port=port,
                log_level="info")
