"""On-disk graph store with optimistic concurrency.

One JSON file per graph under ``<data_dir>/graphs/<id>.json``, written
atomically (temp file + rename).  Corrupt files are skipped with a warning at
load time rather than failing startup.  Mutations are serialized under one
lock; records and graphs are immutable values, so reads need no coordination.
"""

from __future__ import annotations

import json
import logging
import os
import threading
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from hashlib import sha256
from pathlib import Path

from .dsl import graph_from_obj, graph_to_obj, serialize_json
from .graph import CausalGraph

__all__ = ["GraphRecord", "RevisionConflictError", "GraphStore"]

logger = logging.getLogger("cvp.store")


class RevisionConflictError(Exception):
    """A write carried a stale revision; no state was changed."""

    code = "RevisionConflict"

    def __init__(self, message: str, current_revision: int):
        super().__init__(message)
        self.current_revision = current_revision


@dataclass(frozen=True)
class GraphRecord:
    id: str
    graph: CausalGraph
    created_at: str
    updated_at: str
    revision: int

    def to_obj(self) -> dict:
        return {
            "id": self.id,
            "revision": self.revision,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
            "graph": graph_to_obj(self.graph),
        }


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class GraphStore:
    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.graphs_dir = self.data_dir / "graphs"
        self.graphs_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.RLock()
        self._records: dict[str, GraphRecord] = {}
        self._counter = 0
        self._load_all()

    def _load_all(self) -> None:
        for path in sorted(self.graphs_dir.glob("*.json")):
            record = self._load_one(path)
            if record is None:
                logger.warning("skipping corrupt graph file %s", path)
                continue
            self._records[record.id] = record
        self._counter = len(self._records)

    def _load_one(self, path: Path) -> GraphRecord | None:
        try:
            obj = json.loads(path.read_text("utf-8"))
            if not isinstance(obj, dict):
                return None
            graph, errors = graph_from_obj(obj["graph"])
            if errors or graph is None or not graph.validate().ok:
                return None
            record = GraphRecord(
                id=str(obj["id"]),
                graph=graph,
                created_at=str(obj["created_at"]),
                updated_at=str(obj["updated_at"]),
                revision=int(obj["revision"]),
            )
        except (OSError, ValueError, KeyError, TypeError):
            return None
        if record.id != path.stem:
            return None
        return record

    def _persist(self, record: GraphRecord) -> None:
        final = self.graphs_dir / f"{record.id}.json"
        tmp = final.with_suffix(f".tmp{os.getpid()}")
        tmp.write_text(json.dumps(record.to_obj(), ensure_ascii=False, separators=(",", ":")), "utf-8")
        os.replace(tmp, final)

    def _new_id(self, graph: CausalGraph) -> str:
        while True:
            self._counter += 1
            digest = sha256(f"{self._counter}:{serialize_json(graph)}".encode("utf-8")).hexdigest()[:12]
            if digest not in self._records:
                return digest

    # --- CRUD -------------------------------------------------------------

    def create(self, graph: CausalGraph) -> GraphRecord:
        with self._lock:
            now = _now()
            record = GraphRecord(self._new_id(graph), graph, now, now, revision=1)
            self._persist(record)
            self._records[record.id] = record
            return record

    def get(self, graph_id: str) -> GraphRecord | None:
        return self._records.get(graph_id)

    def update(self, graph_id: str, graph: CausalGraph, expected_revision: int) -> GraphRecord:
        """Replace the stored graph iff ``expected_revision`` is current.

        Raises KeyError for unknown ids and RevisionConflictError on staleness.
        """
        with self._lock:
            current = self._records[graph_id]
            if current.revision != expected_revision:
                raise RevisionConflictError(
                    f"expected revision {expected_revision}, current is {current.revision}",
                    current.revision,
                )
            record = replace(current, graph=graph, updated_at=_now(), revision=current.revision + 1)
            self._persist(record)
            self._records[graph_id] = record
            return record

    def delete(self, graph_id: str) -> bool:
        with self._lock:
            if graph_id not in self._records:
                return False
            del self._records[graph_id]
            try:
                (self.graphs_dir / f"{graph_id}.json").unlink()
            except FileNotFoundError:
                pass
            return True

    def list_records(self) -> list[GraphRecord]:
        return sorted(self._records.values(), key=lambda r: (r.created_at, r.id))
