"""HTTP service for interactive sessions.

Endpoints (all bodies and responses are JSON; POST/PATCH bodies carry a
mandatory schema_version field):

    POST  /sessions                      create a session
    GET   /sessions/{id}                 descriptor + current measurements
    PATCH /sessions/{id}/topology        apply one edit, returns fresh measurements
    POST  /sessions/{id}/control         start | pause | step | reset
    GET   /sessions/{id}/metrics         newline-delimited frame stream
    GET   /sessions/{id}/heatmaps        per-neuron output grids over the square
    POST  /sessions/{id}/dataset         upload a CSV dataset
    GET   /sessions/{id}/export          experiment record
    POST  /import                        recreate a session from a record

Configuration comes from flags on `netcap serve` or the environment:
NETCAP_HOST, NETCAP_PORT, NETCAP_MAX_SESSIONS, NETCAP_CADENCE.
"""

from __future__ import annotations

import asyncio
import json
import os
from contextlib import asynccontextmanager
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from fastapi import Body, FastAPI, Request, Response
from fastapi.responses import JSONResponse, StreamingResponse

from netcap.datasets import SQUARE, generate
from netcap.errors import (
    NetcapError,
    ParseError,
    SchemaError,
    ValidationError,
)
from netcap.network import _Compiled
from netcap.records import config_from_obj, edit_from_obj, topology_from_obj
from netcap.session import (
    IllegalTransitionError,
    Session,
    SessionLimitError,
    SessionRegistry,
    UnknownSessionError,
)
from netcap.topology import Topology
from netcap.datasets import _FEATURE_FN

STREAM_POLL_SECONDS = 0.02


@dataclass(frozen=True)
class ServiceSettings:
    host: str = "127.0.0.1"
    port: int = 8410
    max_sessions: int = 16
    cadence: int = 10  # default epochs per metrics frame

    @classmethod
    def from_env(cls) -> "ServiceSettings":
        return cls(
            host=os.environ.get("NETCAP_HOST", cls.host),
            port=int(os.environ.get("NETCAP_PORT", cls.port)),
            max_sessions=int(os.environ.get("NETCAP_MAX_SESSIONS", cls.max_sessions)),
            cadence=int(os.environ.get("NETCAP_CADENCE", cls.cadence)),
        )


def _require_schema(body: dict):
    version = body.get("schema_version")
    if version != 1:
        raise SchemaError(f"schema_version must be 1, got {version!r}")


def _session_from_body(body: dict, settings: ServiceSettings) -> Session:
    topology_obj = body.get("topology") or {"features": ["x1", "x2"], "hidden": [4, 2]}
    if "edges" in topology_obj:
        topology = topology_from_obj(topology_obj)
    else:
        topology = Topology.dense(
            topology_obj.get("features", ["x1", "x2"]),
            topology_obj.get("hidden", [4, 2]),
            topology_obj.get("activation", "tanh"),
        )
    config_obj = dict(body.get("config") or {})
    config_obj.setdefault("epochs_per_tick", settings.cadence)
    config = config_from_obj(config_obj)
    ds = dict(body.get("dataset") or {})
    dataset = generate(
        ds.get("kind", "circle"),
        int(ds.get("n", 200)),
        float(ds.get("noise", 0.0)),
        int(ds.get("seed", 1)),
    )
    return Session(
        topology,
        config,
        dataset,
        train_fraction=float(ds.get("train_fraction", 0.5)),
        split_seed=int(ds.get("split_seed", 0)),
        bias_threshold=float(body.get("bias_threshold", 0.1)),
    )


def create_app(settings: ServiceSettings | None = None) -> FastAPI:
    settings = settings or ServiceSettings.from_env()
    registry = SessionRegistry(max_sessions=settings.max_sessions)

    @asynccontextmanager
    async def lifespan(_: FastAPI):
        yield
        registry.close_all()

    app = FastAPI(title="netcap", version="0.1.0", lifespan=lifespan)
    app.state.registry = registry
    app.state.settings = settings

    @app.exception_handler(NetcapError)
    async def _netcap_error(request: Request, exc: NetcapError) -> Response:
        status = 422
        if isinstance(exc, UnknownSessionError):
            status = 404
        elif isinstance(exc, IllegalTransitionError):
            status = 409
        elif isinstance(exc, SessionLimitError):
            status = 429
        elif isinstance(exc, SchemaError):
            status = 400
        elif isinstance(exc, ParseError):
            status = 422
        return JSONResponse(status_code=status, content={"detail": str(exc)})

    @app.post("/sessions", status_code=201)
    def create_session(body: dict = Body(default={"schema_version": 1})):
        _require_schema(body)
        session = registry.add(_session_from_body(body, settings))
        return session.descriptor()

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return registry.get(session_id).descriptor()

    @app.patch("/sessions/{session_id}/topology")
    def patch_topology(session_id: str, body: dict = Body(...)):
        _require_schema(body)
        session = registry.get(session_id)
        edit = edit_from_obj(body.get("edit") or {})
        descriptor, report = session.patch_topology(edit)
        return {"descriptor": descriptor, "measurements": report.as_dict()}

    @app.post("/sessions/{session_id}/control")
    def control(session_id: str, body: dict = Body(...)):
        _require_schema(body)
        session = registry.get(session_id)
        action = body.get("action")
        steps = int(body.get("steps", 1))
        return session.control(action, steps)

    @app.get("/sessions/{session_id}/metrics")
    async def metrics(session_id: str):
        session = registry.get(session_id)

        async def stream():
            # Late subscribers start at the latest frame, then follow live.
            cursor, generation = session.latest_cursor()
            while True:
                frames, cursor, valid = session.frames_after(cursor, generation)
                if not valid:
                    return  # reset happened; clients resubscribe
                for frame in frames:
                    yield json.dumps(frame.as_dict(), sort_keys=True) + "\n"
                if not frames:
                    await asyncio.sleep(STREAM_POLL_SECONDS)

        return StreamingResponse(stream(), media_type="application/x-ndjson")

    @app.get("/sessions/{session_id}/heatmaps")
    def heatmaps(session_id: str, resolution: int = 50):
        if not 2 <= resolution <= 200:
            raise ValidationError("resolution must be in 2..200")
        session = registry.get(session_id)
        snapshot = session.snapshot()
        axis = np.linspace(-SQUARE, SQUARE, resolution)
        xx, yy = np.meshgrid(axis, axis)
        cols = [
            np.asarray(_FEATURE_FN[f](xx.ravel(), yy.ravel()), dtype=float)
            for f in snapshot.topology.features
        ]
        compiled = _Compiled(snapshot.topology, snapshot.params)
        _, slots, _ = compiled.forward(np.column_stack(cols))
        grids = {}
        for i, node in enumerate(compiled.slots):
            if isinstance(node, str):
                continue
            layer, idx = node
            grids[f"{layer}.{idx}"] = slots[:, i].reshape(resolution, resolution).tolist()
        return {"resolution": resolution, "extent": [-SQUARE, SQUARE], "nodes": grids}

    @app.post("/sessions/{session_id}/dataset")
    async def upload_dataset(session_id: str, request: Request):
        session = registry.get(session_id)
        return session.upload_dataset(await request.body())

    @app.get("/sessions/{session_id}/export")
    def export_session(session_id: str):
        return registry.get(session_id).export()

    @app.post("/import", status_code=201)
    def import_session(body: dict = Body(...)):
        session = registry.add(Session.from_record(body))
        return session.descriptor()

    ui_dir = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    if ui_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def serve(settings: ServiceSettings):
    import uvicorn

    uvicorn.run(create_app(settings), host=settings.host, port=settings.port, log_level="info")
