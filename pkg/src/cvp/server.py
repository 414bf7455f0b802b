"""HTTP/JSON gateway over the engine.

Endpoints (JSON bodies unless noted):

- ``POST /graphs`` (graph JSON, or ``text/x-cvp`` DSL) -> 201 {id, revision, validation}
- ``GET /graphs`` -> listing for sidebars/CI
- ``GET /graphs/{id}`` -> canonical graph JSON; revision in the ETag header
- ``PUT /graphs/{id}`` (If-Match: revision) -> 200 {id, revision, validation}
- ``DELETE /graphs/{id}`` -> 204
- ``GET /graphs/{id}/validate`` -> validation report
- ``GET /graphs/{id}/nodes/{n}/markov-blanket`` -> {parents, children, spouses, blanket}
- ``POST /graphs/{id}/intervene {node}`` -> mutilated graph JSON (preview only, never persisted)
- ``POST /graphs/{id}/plan-check {plan, policy}`` -> plan report
- ``POST /graphs/{id}/suggest-order {modules}`` -> plan
- ``POST /experiments/shift {overrides}`` -> experiment report (synchronous)
- ``GET /health`` -> {status, version}

Error bodies always carry ``code`` and ``detail``; parse/validation problems
map to 400 with the offending diagnostics embedded, unknown ids to 404, stale
revisions to 409, oversized bodies to 413.
"""

from __future__ import annotations

import json
import logging
import os
import sys
from typing import Any

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from . import __version__
from .dsl import WorkflowParseError, parse_json, parse_text, serialize_json
from .errors import MissingParentError, UnknownModuleError
from .graph import CausalGraph
from .logistic import TrainConfig
from .plan import AnchorPolicy, check_plan, plan_from_obj, plan_to_obj, suggest_order
from .shift import ShiftExperimentConfig, report_to_obj, run_experiment, shift_world_graph
from .store import GraphStore, RevisionConflictError

__all__ = ["create_app", "serve"]

logger = logging.getLogger("cvp.gateway")

DEFAULT_MAX_BODY_BYTES = 4 * 1024 * 1024


class _ApiError(Exception):
    def __init__(self, status: int, code: str, detail: str, **extra: Any):
        super().__init__(detail)
        self.status = status
        self.code = code
        self.detail = detail
        self.extra = extra


def _log(event: str, **fields: Any) -> None:
    logger.info("%s %s", event, " ".join(f"{k}={v}" for k, v in fields.items()))


def _validation_obj(graph: CausalGraph) -> dict:
    report = graph.validate()
    return {
        "ok": report.ok,
        "diagnostics": [
            {"code": d.code, "message": d.message, "involved": list(d.involved)}
            for d in report.diagnostics
        ],
    }


def create_app(store: GraphStore, max_body_bytes: int = DEFAULT_MAX_BODY_BYTES) -> FastAPI:
    app = FastAPI(title="cvp gateway", version=__version__)

    @app.exception_handler(_ApiError)
    async def _api_error_handler(_request: Request, exc: _ApiError) -> JSONResponse:
        body = {"code": exc.code, "detail": exc.detail, **exc.extra}
        return JSONResponse(body, status_code=exc.status)

    async def read_body(request: Request) -> bytes:
        body = await request.body()
        if len(body) > max_body_bytes:
            raise _ApiError(413, "PayloadTooLarge", f"body exceeds {max_body_bytes} bytes")
        return body

    def parse_graph_body(body: bytes, content_type: str) -> CausalGraph:
        try:
            if "text/x-cvp" in content_type:
                return parse_text(body)
            return parse_json(body)
        except WorkflowParseError as exc:
            raise _ApiError(
                400, exc.code, str(exc), diagnostics=[e.to_obj() for e in exc.errors]
            ) from None

    def parse_json_body(body: bytes) -> Any:
        try:
            return json.loads(body)
        except (ValueError, RecursionError) as exc:
            raise _ApiError(400, "UnexpectedToken", f"malformed JSON body: {exc}") from None

    def require_record(graph_id: str):
        record = store.get(graph_id)
        if record is None:
            raise _ApiError(404, "NotFound", f"no graph with id {graph_id!r}")
        return record

    def require_keys(obj: Any, required: set[str], optional: set[str] = frozenset()) -> dict:
        if not isinstance(obj, dict):
            raise _ApiError(400, "UnexpectedToken", "body must be a JSON object")
        for key in obj:
            if key not in required | optional:
                raise _ApiError(400, "UnexpectedToken", f"unknown key {key!r}")
        for key in required:
            if key not in obj:
                raise _ApiError(400, "UnexpectedToken", f"missing key {key!r}")
        return obj

    # --- graphs ------------------------------------------------------------

    @app.post("/graphs", status_code=201)
    async def create_graph(request: Request):
        body = await read_body(request)
        graph = parse_graph_body(body, request.headers.get("content-type", ""))
        record = store.create(graph)
        _log("graph_created", id=record.id, revision=record.revision, nodes=len(graph))
        return {"id": record.id, "revision": record.revision, "validation": _validation_obj(graph)}

    @app.get("/graphs")
    async def list_graphs():
        return {
            "graphs": [
                {
                    "id": r.id,
                    "name": r.graph.name,
                    "revision": r.revision,
                    "created_at": r.created_at,
                    "updated_at": r.updated_at,
                    "nodes": len(r.graph),
                    "edges": len(r.graph.edges),
                }
                for r in store.list_records()
            ]
        }

    @app.get("/graphs/{graph_id}")
    async def get_graph(graph_id: str):
        record = require_record(graph_id)
        return Response(
            serialize_json(record.graph),
            media_type="application/json",
            headers={"ETag": f'"{record.revision}"'},
        )

    @app.put("/graphs/{graph_id}")
    async def put_graph(graph_id: str, request: Request):
        record = require_record(graph_id)
        if_match = request.headers.get("if-match")
        if if_match is None:
            raise _ApiError(409, "RevisionConflict", "If-Match header with the current revision is required")
        try:
            expected = int(if_match.strip().strip('"'))
        except ValueError:
            raise _ApiError(409, "RevisionConflict", f"If-Match must be an integer revision, got {if_match!r}") from None
        body = await read_body(request)
        graph = parse_graph_body(body, request.headers.get("content-type", ""))
        try:
            updated = store.update(record.id, graph, expected)
        except RevisionConflictError as exc:
            raise _ApiError(409, "RevisionConflict", str(exc), current_revision=exc.current_revision) from None
        _log("graph_updated", id=updated.id, revision=updated.revision)
        return {"id": updated.id, "revision": updated.revision, "validation": _validation_obj(graph)}

    @app.delete("/graphs/{graph_id}", status_code=204)
    async def delete_graph(graph_id: str):
        if not store.delete(graph_id):
            raise _ApiError(404, "NotFound", f"no graph with id {graph_id!r}")
        _log("graph_deleted", id=graph_id)
        return Response(status_code=204)

    # --- analysis ------------------------------------------------------------

    @app.get("/graphs/{graph_id}/validate")
    async def validate_graph(graph_id: str):
        record = require_record(graph_id)
        return _validation_obj(record.graph)

    @app.get("/graphs/{graph_id}/nodes/{node_id}/markov-blanket")
    async def markov_blanket(graph_id: str, node_id: str):
        record = require_record(graph_id)
        graph = record.graph
        if not graph.has_node(node_id):
            raise _ApiError(404, "UnknownNodeRef", f"no node {node_id!r} in graph {graph_id!r}")
        return {
            "parents": sorted(graph.parents(node_id)),
            "children": sorted(graph.children(node_id)),
            "spouses": sorted(graph.spouses(node_id)),
            "blanket": sorted(graph.markov_blanket(node_id)),
        }

    @app.post("/graphs/{graph_id}/intervene")
    async def intervene(graph_id: str, request: Request):
        record = require_record(graph_id)
        obj = require_keys(parse_json_body(await read_body(request)), {"node"})
        node = obj["node"]
        if not isinstance(node, str) or not record.graph.has_node(node):
            raise _ApiError(400, "UnknownNodeRef", f"no node {node!r} in graph {graph_id!r}")
        mutilated = record.graph.intervene(node)
        return Response(serialize_json(mutilated), media_type="application/json")

    @app.post("/graphs/{graph_id}/plan-check")
    async def plan_check(graph_id: str, request: Request):
        record = require_record(graph_id)
        obj = require_keys(parse_json_body(await read_body(request)), {"plan"}, {"policy"})
        try:
            plan = plan_from_obj(obj["plan"])
            policy = AnchorPolicy.parse(obj.get("policy", AnchorPolicy.PARENTS_ONLY))
        except ValueError as exc:
            raise _ApiError(400, "UnexpectedToken", str(exc)) from None
        report = check_plan(record.graph, plan, policy)
        return report.to_obj()

    @app.post("/graphs/{graph_id}/suggest-order")
    async def suggest(graph_id: str, request: Request):
        record = require_record(graph_id)
        obj = require_keys(parse_json_body(await read_body(request)), {"modules"})
        modules = obj["modules"]
        if not isinstance(modules, list) or not all(isinstance(m, str) for m in modules):
            raise _ApiError(400, "UnexpectedToken", "'modules' must be an array of strings")
        try:
            plan = suggest_order(record.graph, modules)
        except UnknownModuleError as exc:
            raise _ApiError(400, "UnknownModule", str(exc)) from None
        except MissingParentError as exc:
            raise _ApiError(400, "MissingParent", str(exc)) from None
        return plan_to_obj(plan)

    # --- experiments -----------------------------------------------------------

    _CONFIG_KEYS = {
        "seed", "n_train", "n_test", "flip_prob",
        "spurious_strength", "spurious_noise_sd",
        "train_env_sign", "test_env_sign", "trainer",
    }
    _TRAINER_KEYS = {"learning_rate", "max_iterations", "gradient_tolerance", "initialization"}

    @app.post("/experiments/shift")
    async def shift_experiment(request: Request):
        body = await read_body(request)
        obj = parse_json_body(body) if body.strip() else {}
        overrides = require_keys(obj, set(), _CONFIG_KEYS)
        trainer_overrides = overrides.pop("trainer", {})
        require_keys(trainer_overrides, set(), _TRAINER_KEYS)
        try:
            trainer = TrainConfig(**trainer_overrides)
            config = ShiftExperimentConfig(trainer=trainer, **overrides)
        except (TypeError, ValueError) as exc:
            raise _ApiError(400, "UnexpectedToken", f"invalid experiment config: {exc}") from None
        report = run_experiment(config, shift_world_graph())
        _log("experiment_run", seed=config.seed, digest=report.generator_digest[:12])
        return report_to_obj(report)

    @app.get("/health")
    async def health():
        return {"status": "ok", "version": __version__}

    return app


def serve(
    port: int = 8321,
    data_dir: str = "./cvp-data",
    max_body_bytes: int = DEFAULT_MAX_BODY_BYTES,
    host: str = "127.0.0.1",
) -> None:
    """Run the gateway until terminated.

    ``CVP_PORT`` and ``CVP_DATA_DIR`` override the arguments when set.
    """
    import uvicorn

    port = int(os.environ.get("CVP_PORT", port))
    data_dir = os.environ.get("CVP_DATA_DIR", data_dir)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO,
        format="%(asctime)s %(levelname)s %(message)s",
    )
    store = GraphStore(data_dir)
    _log("serve_start", port=port, data_dir=data_dir, graphs=len(store.list_records()))
    uvicorn.run(create_app(store, max_body_bytes), host=host, port=port, log_level="info")
