"""Embedded persistence: one sqlite file for documents, blob files by hash.

Domain objects are stored as JSON documents keyed by (kind, id). Uploaded
files live outside the database as content-addressed blobs whose id is
their SHA-256; reads re-hash and fail loudly on mismatch, so silent bit
rot can never surface as a valid submission.

Writes happen inside explicit transactions (BEGIN IMMEDIATE under a
process-wide lock), which also gives the per-task single-writer ordering:
two racing submissions to one task serialize, and the loser sees the
updated state.

``fault_hook`` exists for crash-consistency tests: it is called with a
point name at well-defined moments of a write, and a test hook may raise
to simulate the process dying there.
"""

from __future__ import annotations

import hashlib
import json
import os
import sqlite3
import threading
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Iterator, Optional


class StorageCorruption(Exception):
    """Blob content no longer matches its recorded hash."""


class NotFound(KeyError):
    """No document with that kind and id."""


FaultHook = Optional[Callable[[str], None]]


class Store:
    def __init__(self, data_dir: str | Path, fault_hook: FaultHook = None):
        self.data_dir = Path(data_dir)
        self.blob_dir = self.data_dir / "blobs"
        self.blob_dir.mkdir(parents=True, exist_ok=True)
        self.fault_hook = fault_hook
        self._lock = threading.RLock()
        self._conn = sqlite3.connect(
            self.data_dir / "seshat.db", check_same_thread=False, isolation_level=None
        )
        self._conn.execute("PRAGMA journal_mode=WAL")
        self._conn.execute("PRAGMA synchronous=FULL")
        self._conn.execute(
            "CREATE TABLE IF NOT EXISTS documents ("
            " kind TEXT NOT NULL, id TEXT NOT NULL, doc TEXT NOT NULL,"
            " PRIMARY KEY (kind, id))"
        )
        self._conn.execute(
            "CREATE TABLE IF NOT EXISTS idempotency ("
            " user_id TEXT NOT NULL, endpoint TEXT NOT NULL, key TEXT NOT NULL,"
            " status INTEGER NOT NULL, body TEXT NOT NULL,"
            " PRIMARY KEY (user_id, endpoint, key))"
        )

    def close(self) -> None:
        self._conn.close()

    def _fault(self, point: str) -> None:
        if self.fault_hook is not None:
            self.fault_hook(point)

    # -- transactions -------------------------------------------------------

    @contextmanager
    def transaction(self) -> Iterator[sqlite3.Connection]:
        with self._lock:
            self._conn.execute("BEGIN IMMEDIATE")
            try:
                yield self._conn
                self._fault("before-commit")
                self._conn.execute("COMMIT")
            except BaseException:
                self._conn.execute("ROLLBACK")
                raise
            self._fault("after-commit")

    # -- documents ----------------------------------------------------------

    def put_doc(self, kind: str, doc_id: str, doc: dict[str, Any]) -> None:
        with self._lock:
            in_txn = self._conn.in_transaction
            payload = json.dumps(doc, ensure_ascii=False)
            self._conn.execute(
                "INSERT INTO documents (kind, id, doc) VALUES (?, ?, ?)"
                " ON CONFLICT (kind, id) DO UPDATE SET doc = excluded.doc",
                (kind, doc_id, payload),
            )
            if not in_txn:
                self._conn.commit()

    def get_doc(self, kind: str, doc_id: str) -> dict[str, Any]:
        with self._lock:
            row = self._conn.execute(
                "SELECT doc FROM documents WHERE kind = ? AND id = ?", (kind, doc_id)
            ).fetchone()
        if row is None:
            raise NotFound(f"{kind}:{doc_id}")
        return json.loads(row[0])

    def has_doc(self, kind: str, doc_id: str) -> bool:
        with self._lock:
            row = self._conn.execute(
                "SELECT 1 FROM documents WHERE kind = ? AND id = ?", (kind, doc_id)
            ).fetchone()
        return row is not None

    def delete_doc(self, kind: str, doc_id: str) -> None:
        with self._lock:
            in_txn = self._conn.in_transaction
            self._conn.execute(
                "DELETE FROM documents WHERE kind = ? AND id = ?", (kind, doc_id)
            )
            if not in_txn:
                self._conn.commit()

    def list_docs(self, kind: str) -> list[dict[str, Any]]:
        with self._lock:
            rows = self._conn.execute(
                "SELECT doc FROM documents WHERE kind = ? ORDER BY rowid", (kind,)
            ).fetchall()
        return [json.loads(r[0]) for r in rows]

    def find_doc(self, kind: str, **fields: Any) -> dict[str, Any] | None:
        for doc in self.list_docs(kind):
            if all(doc.get(k) == v for k, v in fields.items()):
                return doc
        return None

    # -- blobs --------------------------------------------------------------

    def put_blob(self, data: bytes) -> str:
        """Content-addressed write: the blob id is the SHA-256 of the data.

        The file is fsynced and atomically renamed before anything
        references it, so a crash can orphan a blob but never truncate one.
        The metadata row commits with whatever transaction references the
        blob.
        """
        self._fault("before-blob-write")
        blob_id = hashlib.sha256(data).hexdigest()
        final = self.blob_dir / blob_id
        if not final.exists():
            tmp = self.blob_dir / f".{blob_id}.{os.getpid()}.tmp"
            with open(tmp, "wb") as fh:
                fh.write(data)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, final)
        if not self.has_doc("blob", blob_id):
            self.put_doc(
                "blob",
                blob_id,
                {
                    "id": blob_id,
                    "sha256": blob_id,
                    "size": len(data),
                    "created_at": datetime.now(timezone.utc).isoformat(),
                },
            )
        self._fault("after-blob-write")
        return blob_id

    def get_blob(self, blob_id: str) -> bytes:
        if not self.has_doc("blob", blob_id):
            raise NotFound(f"blob:{blob_id}")
        path = self.blob_dir / blob_id
        try:
            data = path.read_bytes()
        except FileNotFoundError:
            raise StorageCorruption(f"blob {blob_id} is missing") from None
        if hashlib.sha256(data).hexdigest() != blob_id:
            raise StorageCorruption(f"blob {blob_id} fails its hash check")
        return data

    # -- idempotency --------------------------------------------------------

    def idempotent_replay(
        self, user_id: str, endpoint: str, key: str
    ) -> tuple[int, Any] | None:
        with self._lock:
            row = self._conn.execute(
                "SELECT status, body FROM idempotency"
                " WHERE user_id = ? AND endpoint = ? AND key = ?",
                (user_id, endpoint, key),
            ).fetchone()
        if row is None:
            return None
        return row[0], json.loads(row[1])

    def idempotent_record(
        self, user_id: str, endpoint: str, key: str, status: int, body: Any
    ) -> None:
        with self._lock:
            in_txn = self._conn.in_transaction
            self._conn.execute(
                "INSERT OR REPLACE INTO idempotency (user_id, endpoint, key, status, body)"
                " VALUES (?, ?, ?, ?, ?)",
                (user_id, endpoint, key, status, json.dumps(body)),
            )
            if not in_txn:
                self._conn.commit()
