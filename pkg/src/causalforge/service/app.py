"""FastAPI application over the task store.

All error responses share the body {"error": {"code", "message"}} with 400
for malformed input, 404 for unknown ids, and 409 for state transitions the
task machine does not allow. Handlers are plain functions so FastAPI runs
them on its own thread pool; the store serializes access internally.
"""

import os
from pathlib import Path

from fastapi import FastAPI
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..exceptions import CausalForgeError
from ..pipeline import SimulateSource, TaskConfig
from ..priors import PriorKnowledge
from .models import AnnotationDelta, TaskSubmission
from .store import InvalidTransition, TaskStore, UnknownTask

UI_DIR_ENV = "CAUSALFORGE_UI_DIR"


def _error(status, code, message):
    return JSONResponse(
        status_code=status, content={"error": {"code": code, "message": message}}
    )


def _default_ui_dir():
    configured = os.environ.get(UI_DIR_ENV)
    if configured:
        return configured
    return str(Path(__file__).resolve().parents[3] / "frontend" / "dist")


def create_app(data_dir=None, workers=None) -> FastAPI:
    """Build the service app; data_dir enables JSON-file persistence."""
    app = FastAPI(title="causalforge", docs_url=None, redoc_url=None)
    store = TaskStore(data_dir=data_dir, workers=workers)
    app.state.store = store

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request, exc):
        parts = []
        for err in exc.errors()[:3]:
            where = ".".join(str(p) for p in err.get("loc", ()))
            parts.append(f"{where}: {err.get('msg', 'invalid')}")
        return _error(400, "malformed", "; ".join(parts) or "malformed request")

    @app.post("/api/tasks", status_code=202)
    def submit_task(body: TaskSubmission):
        try:
            cfg = body.to_task_config()
        except CausalForgeError as exc:
            return _error(400, "invalid_config", str(exc))
        return {"id": store.submit(cfg)}

    @app.get("/api/tasks")
    def list_tasks():
        return {"tasks": store.list()}

    @app.get("/api/tasks/{task_id}")
    def get_task(task_id: str):
        try:
            return store.get(task_id)
        except UnknownTask:
            return _error(404, "unknown_task", f"no task with id {task_id!r}")

    @app.get("/api/tasks/{task_id}/result")
    def get_result(task_id: str):
        try:
            record = store.get(task_id)
        except UnknownTask:
            return _error(404, "unknown_task", f"no task with id {task_id!r}")
        if record["state"] != "done":
            return _error(
                404, "no_result", f"task {task_id} is {record['state']}, not done"
            )
        return record["result"]

    @app.post("/api/tasks/{task_id}/annotations", status_code=202)
    def annotate_task(task_id: str, delta: AnnotationDelta):
        try:
            record = store.get(task_id)
        except UnknownTask:
            return _error(404, "unknown_task", f"no task with id {task_id!r}")
        if record["state"] != "done":
            return _error(
                409,
                "not_done",
                f"task {task_id} is {record['state']}; annotate a completed task",
            )
        cfg = TaskConfig.from_dict(record["config"])
        base = cfg.prior or PriorKnowledge()
        merged = PriorKnowledge(
            required=base.required | frozenset(map(tuple, delta.required)),
            forbidden=base.forbidden | frozenset(map(tuple, delta.forbidden)),
        )
        d = (
            cfg.data_source.graph.d
            if isinstance(cfg.data_source, SimulateSource)
            else None
        )
        try:
            merged.validate(d)
            cfg.prior = merged
            cfg.validate()
        except CausalForgeError as exc:
            return _error(400, "prior_conflict", str(exc))
        return {"id": store.submit(cfg, parent_id=task_id), "parent_id": task_id}

    @app.delete("/api/tasks/{task_id}")
    def delete_task(task_id: str):
        try:
            store.delete(task_id)
        except UnknownTask:
            return _error(404, "unknown_task", f"no task with id {task_id!r}")
        except InvalidTransition as exc:
            return _error(409, "busy", str(exc))
        return {"deleted": task_id}

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    ui_dir = _default_ui_dir()
    if Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
