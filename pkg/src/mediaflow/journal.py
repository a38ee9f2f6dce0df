"""Append-only NDJSON logs and the journal-backed dispatch queue.

Both the metadata plane and the workflow engine persist their state as
newline-delimited JSON. The queue stands in for a broker: messages survive
process restarts by replaying the journal (enqueue and dequeue entries),
and a lock guarantees each message is handed to exactly one consumer.
"""

from __future__ import annotations

import json
import os
import threading
from collections import deque
from pathlib import Path
from typing import Any, Iterator


def append_ndjson(handle, record: Any) -> None:
    handle.write(json.dumps(record, ensure_ascii=False, separators=(",", ":")) + "\n")
    handle.flush()


def read_ndjson(path: Path) -> Iterator[Any]:
    if not path.exists():
        return
    with path.open("r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                yield json.loads(line)


def open_append(path: Path):
    path.parent.mkdir(parents=True, exist_ok=True)
    return path.open("a", encoding="utf-8")


class DurableQueue:
    """FIFO queue persisted to an NDJSON journal.

    Journal entries are ``{"op": "enq", "msg": ...}`` and ``{"op": "deq"}``;
    a dequeue consumes the oldest unconsumed enqueue, so replaying the file
    reconstructs the pending set. ``dequeue`` is atomic under the internal
    lock: a message goes to exactly one caller.
    """

    def __init__(self, path: Path):
        self._path = path
        self._lock = threading.Lock()
        self._pending: deque = deque()
        for entry in read_ndjson(path):
            if entry["op"] == "enq":
                self._pending.append(entry["msg"])
            elif entry["op"] == "deq" and self._pending:
                self._pending.popleft()
        self._handle = open_append(path)

    def enqueue(self, message: Any) -> None:
        with self._lock:
            append_ndjson(self._handle, {"op": "enq", "msg": message})
            self._pending.append(message)

    def dequeue(self) -> Any | None:
        with self._lock:
            if not self._pending:
                return None
            append_ndjson(self._handle, {"op": "deq"})
            return self._pending.popleft()

    def __len__(self) -> int:
        with self._lock:
            return len(self._pending)

    def close(self) -> None:
        with self._lock:
            self._handle.close()


def atomic_write_text(path: Path, text: str) -> None:
    """Write-temp-then-rename so readers never observe a partial file."""
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def atomic_write_bytes(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)
