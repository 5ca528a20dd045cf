"""Task records, the worker pool, and JSON-file persistence.

One record per task moves through queued -> running -> done | failed, never
backwards and never skipping. All record access goes through a single lock;
served records are snapshots. When a data directory is configured every
record is flushed to its own JSON file through an atomic rename, so a
completed result survives restarts.
"""

import json
import os
import secrets
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from ..exceptions import StageError
from ..pipeline import TaskConfig, run_task

STATES = ("queued", "running", "done", "failed")

DATA_DIR_ENV = "CAUSALFORGE_DATA_DIR"


class UnknownTask(KeyError):
    pass


class InvalidTransition(RuntimeError):
    pass


class TaskStore:
    def __init__(self, data_dir=None, workers=None):
        if data_dir is None:
            data_dir = os.environ.get(DATA_DIR_ENV) or None
        self.data_dir = Path(data_dir) if data_dir else None
        if self.data_dir:
            self.data_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._records = {}
        self._sinks = {}
        self._futures = {}
        self._pool = ThreadPoolExecutor(max_workers=workers or os.cpu_count() or 2)
        self._load_existing()

    # -- persistence ---------------------------------------------------------

    def _persist(self, record):
        if not self.data_dir:
            return
        stored = {k: v for k, v in record.items() if k != "progress"}
        tmp = self.data_dir / f".{record['id']}.tmp"
        tmp.write_text(json.dumps(stored, sort_keys=True))
        os.replace(tmp, self.data_dir / f"{record['id']}.json")

    def _load_existing(self):
        if not self.data_dir:
            return
        for path in sorted(self.data_dir.glob("*.json")):
            try:
                record = json.loads(path.read_text())
            except (OSError, json.JSONDecodeError):
                continue
            if record.get("id") != path.stem or record.get("state") not in STATES:
                continue
            if record["state"] in ("queued", "running"):
                # a previous process died mid-task; the work is gone
                record["state"] = "failed"
                record["error"] = {
                    "code": "interrupted",
                    "message": "service stopped before the task finished",
                }
                self._persist(record)
            record["progress"] = None
            self._records[record["id"]] = record

    # -- lifecycle -----------------------------------------------------------

    def submit(self, config: TaskConfig, parent_id=None):
        """Queue a validated config; returns the new task id."""
        task_id = secrets.token_hex(6)
        record = {
            "id": task_id,
            "state": "queued",
            "config": config.to_dict(),
            "result": None,
            "error": None,
            "parent_id": parent_id,
            "created_at": time.time(),
            "finished_at": None,
            "progress": None,
        }
        with self._lock:
            self._records[task_id] = record
            self._sinks[task_id] = []
            self._persist(record)
            self._futures[task_id] = self._pool.submit(self._execute, task_id, config)
        return task_id

    def _transition(self, task_id, state, **fields):
        with self._lock:
            record = self._records[task_id]
            record["state"] = state
            record.update(fields)
            self._persist(record)

    def _execute(self, task_id, config):
        self._transition(task_id, "running")
        sink = self._sinks[task_id]
        try:
            result = run_task(config, trace=sink)
        except StageError as exc:
            self._transition(
                task_id,
                "failed",
                error={"code": "stage_error", "stage": exc.stage, "message": str(exc)},
                finished_at=time.time(),
            )
        except Exception as exc:  # defensive: a worker must never die silently
            self._transition(
                task_id,
                "failed",
                error={"code": "task_error", "message": str(exc)},
                finished_at=time.time(),
            )
        else:
            self._transition(
                task_id,
                "done",
                result=result.to_dict(),
                finished_at=time.time(),
            )

    # -- queries -------------------------------------------------------------

    def _snapshot(self, record):
        snap = json.loads(json.dumps(record, sort_keys=True))
        sink = self._sinks.get(record["id"], ())
        snap["progress"] = sink[-1] if sink else None
        return snap

    def get(self, task_id):
        with self._lock:
            record = self._records.get(task_id)
            if record is None:
                raise UnknownTask(task_id)
            return self._snapshot(record)

    def list(self):
        with self._lock:
            records = sorted(
                self._records.values(), key=lambda r: (r["created_at"], r["id"])
            )
            return [
                {
                    "id": r["id"],
                    "state": r["state"],
                    "algorithm": r["config"]["algorithm"],
                    "parent_id": r["parent_id"],
                    "created_at": r["created_at"],
                }
                for r in records
            ]

    def result(self, task_id):
        record = self.get(task_id)
        if record["state"] != "done":
            return None
        return record["result"]

    def delete(self, task_id):
        """Remove a finished or still-queued task; a running one stays."""
        with self._lock:
            record = self._records.get(task_id)
            if record is None:
                raise UnknownTask(task_id)
            if record["state"] == "queued":
                future = self._futures.get(task_id)
                if future is not None and not future.cancel():
                    raise InvalidTransition("task already started")
            elif record["state"] == "running":
                raise InvalidTransition("task is running")
            del self._records[task_id]
            self._sinks.pop(task_id, None)
            self._futures.pop(task_id, None)
            if self.data_dir:
                try:
                    (self.data_dir / f"{task_id}.json").unlink()
                except FileNotFoundError:
                    pass

    def shutdown(self):
        self._pool.shutdown(wait=True)
