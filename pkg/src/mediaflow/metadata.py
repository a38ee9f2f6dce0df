"""Versioned per-asset, per-operator metadata records with an event feed.

Records are append-only: re-running a workflow adds a new version instead
of overwriting, and the search consumer replays the event log. Version
numbers are consecutive per (asset, operator) pair; event sequence numbers
are globally monotone and gap-free. Both logs are NDJSON so the state is
rebuildable by replay.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

from .errors import BodyTooLarge, StorageFailure, UnknownAsset
from .journal import append_ndjson, open_append, read_ndjson

MAX_BODY_BYTES = 4 * 1024 * 1024

STATUS_OK = "Ok"
STATUS_FAILED = "Failed"


@dataclass
class MetadataRecord:
    asset_id: str
    operator_name: str
    version: int
    produced_at: int  # ms since epoch, UTC
    status: str  # Ok | Failed
    body: object  # JSON tree
    execution_id: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "asset_id": self.asset_id,
            "operator_name": self.operator_name,
            "version": self.version,
            "produced_at": self.produced_at,
            "status": self.status,
            "body": self.body,
            "execution_id": self.execution_id,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "MetadataRecord":
        return cls(
            asset_id=doc["asset_id"],
            operator_name=doc["operator_name"],
            version=doc["version"],
            produced_at=doc["produced_at"],
            status=doc["status"],
            body=doc["body"],
            execution_id=doc.get("execution_id"),
        )


@dataclass
class MetadataEvent:
    sequence: int
    asset_id: str
    operator_name: str
    version: int

    def to_json(self) -> dict:
        return {
            "sequence": self.sequence,
            "asset_id": self.asset_id,
            "operator_name": self.operator_name,
            "version": self.version,
        }


class MetadataPlane:
    """Record store plus event feed.

    Same-pair writes serialize through a per-pair lock for version
    assignment; sequence assignment and the two journal appends happen in
    one global critical section, so an event is published iff its record
    committed, in commit order.
    """

    def __init__(
        self,
        root: Path,
        asset_exists: Optional[Callable[[str], bool]] = None,
        clock_ms: Callable[[], int] = lambda: int(time.time() * 1000),
    ):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._asset_exists = asset_exists
        self._clock_ms = clock_ms
        self._records: dict[tuple[str, str], list[MetadataRecord]] = {}
        self._events: list[MetadataEvent] = []
        self._known_assets: set[str] = set()
        self._pair_locks: dict[tuple[str, str], threading.Lock] = {}
        self._pair_locks_guard = threading.Lock()
        self._commit_lock = threading.Lock()
        self._load()
        self._records_handle = open_append(self.root / "records.ndjson")
        self._events_handle = open_append(self.root / "events.ndjson")

    def _load(self) -> None:
        for doc in read_ndjson(self.root / "records.ndjson"):
            record = MetadataRecord.from_json(doc)
            self._records.setdefault((record.asset_id, record.operator_name), []).append(record)
            self._known_assets.add(record.asset_id)
        for history in self._records.values():
            history.sort(key=lambda r: r.version)
        for doc in read_ndjson(self.root / "events.ndjson"):
            self._events.append(
                MetadataEvent(doc["sequence"], doc["asset_id"], doc["operator_name"], doc["version"])
            )

    def _pair_lock(self, pair: tuple[str, str]) -> threading.Lock:
        with self._pair_locks_guard:
            lock = self._pair_locks.get(pair)
            if lock is None:
                lock = self._pair_locks[pair] = threading.Lock()
            return lock

    def store_metadata(
        self,
        asset_id: str,
        operator_name: str,
        body: object,
        status: str = STATUS_OK,
        execution_id: Optional[str] = None,
    ) -> int:
        if self._asset_exists is not None and not self._asset_exists(asset_id):
            raise UnknownAsset(f"asset {asset_id} not found")
        if status == STATUS_OK and body is None:
            raise StorageFailure("Ok records require a body")
        encoded = json.dumps(body, ensure_ascii=False)
        if len(encoded.encode("utf-8")) > MAX_BODY_BYTES:
            raise BodyTooLarge(f"metadata body exceeds {MAX_BODY_BYTES} bytes")

        pair = (asset_id, operator_name)
        with self._pair_lock(pair):
            history = self._records.setdefault(pair, [])
            version = len(history) + 1
            record = MetadataRecord(
                asset_id=asset_id,
                operator_name=operator_name,
                version=version,
                produced_at=self._clock_ms(),
                status=status,
                body=body,
                execution_id=execution_id,
            )
            with self._commit_lock:
                event = MetadataEvent(len(self._events) + 1, asset_id, operator_name, version)
                try:
                    append_ndjson(self._records_handle, record.to_json())
                    append_ndjson(self._events_handle, event.to_json())
                except OSError as exc:
                    raise StorageFailure(f"committing metadata: {exc}") from exc
                history.append(record)
                self._events.append(event)
                self._known_assets.add(asset_id)
        return version

    def get_metadata(
        self, asset_id: str, operator_name: Optional[str] = None
    ) -> list[MetadataRecord]:
        """Latest version per operator, or the full ascending history of one."""
        if (
            self._asset_exists is not None
            and not self._asset_exists(asset_id)
            and asset_id not in self._known_assets
        ):
            raise UnknownAsset(f"asset {asset_id} not found")
        if operator_name is not None:
            with self._pair_lock((asset_id, operator_name)):
                return list(self._records.get((asset_id, operator_name), []))
        with self._commit_lock:
            latest = [
                history[-1]
                for (aid, _), history in self._records.items()
                if aid == asset_id and history
            ]
        latest.sort(key=lambda r: r.operator_name)
        return latest

    def get_record(self, asset_id: str, operator_name: str, version: int) -> MetadataRecord:
        with self._pair_lock((asset_id, operator_name)):
            history = self._records.get((asset_id, operator_name), [])
            for record in history:
                if record.version == version:
                    return record
        raise UnknownAsset(f"no record ({asset_id}, {operator_name}, v{version})")

    def events_after(self, sequence: int) -> list[MetadataEvent]:
        with self._commit_lock:
            return [e for e in self._events if e.sequence > sequence]

    def event_count(self) -> int:
        with self._commit_lock:
            return len(self._events)

    def record_count(self) -> int:
        with self._commit_lock:
            return sum(len(h) for h in self._records.values())

    def close(self) -> None:
        self._records_handle.close()
        self._events_handle.close()
