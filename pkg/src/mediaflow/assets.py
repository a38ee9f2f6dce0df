"""Durable storage for media payloads and their descriptors.

Layout mirrors an object store: ``assets/<first 2 hex>/<id>.bin`` for the
payload plus a JSON descriptor sidecar next to it. Descriptor writes are
atomic (write temp, rename), so a crashed put never leaves a readable but
inconsistent descriptor.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Optional

from .errors import EmptyPayload, NotFound, StorageFailure
from .journal import atomic_write_text


class MediaKind(str, Enum):
    IMAGE = "Image"
    VIDEO = "Video"
    AUDIO = "Audio"
    TEXT = "Text"

    @classmethod
    def parse(cls, value: str) -> "MediaKind":
        for kind in cls:
            if kind.value == value:
                return kind
        raise ValueError(f"unknown media kind {value!r}")


@dataclass
class MediaAsset:
    """Descriptor for one stored payload."""

    id: str  # 32 lowercase hex chars
    kind: MediaKind
    name: str
    byte_length: int
    created_at: int  # ms since epoch, UTC
    content_digest: str  # sha256 hex
    transcript: Optional[str] = field(default=None)  # sidecar text for the transcribe stub

    def to_json(self) -> dict:
        doc = {
            "id": self.id,
            "kind": self.kind.value,
            "name": self.name,
            "byte_length": self.byte_length,
            "created_at": self.created_at,
            "content_digest": self.content_digest,
        }
        if self.transcript is not None:
            doc["transcript"] = self.transcript
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "MediaAsset":
        return cls(
            id=doc["id"],
            kind=MediaKind.parse(doc["kind"]),
            name=doc["name"],
            byte_length=doc["byte_length"],
            created_at=doc["created_at"],
            content_digest=doc["content_digest"],
            transcript=doc.get("transcript"),
        )


@dataclass
class VideoManifest:
    """Ordering of extracted frame assets for one source video."""

    source: str
    frame_rate: float
    frame_ids: list[str]

    def to_json(self) -> dict:
        return {"source": self.source, "frame_rate": self.frame_rate, "frame_ids": self.frame_ids}


def _default_clock_ms() -> int:
    return int(time.time() * 1000)


def _default_id_factory() -> str:
    return uuid.uuid4().hex


def content_digest(payload: bytes) -> str:
    return hashlib.sha256(payload).hexdigest()


class AssetStore:
    """Filesystem-backed asset repository.

    ``event_sink`` (if wired) receives one AssetCreated document per put,
    after the payload and descriptor are durably on disk; workflow triggers
    hang off that feed. ``origin`` distinguishes user uploads from
    pipeline-derived media (extracted frames) so triggers can ignore the
    latter and not cascade.
    """

    def __init__(
        self,
        root: Path,
        event_sink: Optional[Callable[[dict], None]] = None,
        clock_ms: Callable[[], int] = _default_clock_ms,
        id_factory: Callable[[], str] = _default_id_factory,
    ):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._event_sink = event_sink
        self._clock_ms = clock_ms
        self._id_factory = id_factory
        self._lock = threading.Lock()
        self._descriptors: dict[str, MediaAsset] = {}
        self._load()

    def _load(self) -> None:
        for sidecar in self.root.glob("*/*.json"):
            try:
                asset = MediaAsset.from_json(json.loads(sidecar.read_text(encoding="utf-8")))
            except (ValueError, KeyError):
                continue  # ignore partial leftovers
            self._descriptors[asset.id] = asset

    def _paths(self, asset_id: str) -> tuple[Path, Path]:
        shard = self.root / asset_id[:2]
        return shard / f"{asset_id}.bin", shard / f"{asset_id}.json"

    def put_asset(
        self,
        payload: bytes,
        kind: MediaKind,
        name: str,
        transcript: Optional[str] = None,
        origin: str = "upload",
    ) -> str:
        if not payload:
            raise EmptyPayload("payload is empty")
        if not name:
            raise EmptyPayload("asset name is empty")
        asset_id = self._id_factory()
        if kind == MediaKind.AUDIO and transcript is None:
            # Audio stub: the payload is the spoken text.
            transcript = payload.decode("utf-8", errors="replace")
        asset = MediaAsset(
            id=asset_id,
            kind=kind,
            name=name,
            byte_length=len(payload),
            created_at=self._clock_ms(),
            content_digest=content_digest(payload),
            transcript=transcript,
        )
        payload_path, sidecar_path = self._paths(asset_id)
        try:
            payload_path.parent.mkdir(parents=True, exist_ok=True)
            payload_path.write_bytes(payload)
            atomic_write_text(sidecar_path, json.dumps(asset.to_json(), ensure_ascii=False))
        except OSError as exc:
            raise StorageFailure(f"writing asset {asset_id}: {exc}") from exc
        with self._lock:
            self._descriptors[asset_id] = asset
        if self._event_sink is not None:
            self._event_sink(
                {
                    "type": "asset_created",
                    "asset_id": asset_id,
                    "kind": kind.value,
                    "name": name,
                    "origin": origin,
                }
            )
        return asset_id

    def get_asset(self, asset_id: str) -> tuple[MediaAsset, bytes]:
        with self._lock:
            asset = self._descriptors.get(asset_id)
        if asset is None:
            raise NotFound(f"asset {asset_id} not found")
        payload_path, _ = self._paths(asset_id)
        try:
            payload = payload_path.read_bytes()
        except OSError as exc:
            raise StorageFailure(f"reading asset {asset_id}: {exc}") from exc
        if content_digest(payload) != asset.content_digest:
            raise StorageFailure(f"asset {asset_id} payload digest mismatch")
        return asset, payload

    def get_descriptor(self, asset_id: str) -> MediaAsset:
        with self._lock:
            asset = self._descriptors.get(asset_id)
        if asset is None:
            raise NotFound(f"asset {asset_id} not found")
        return asset

    def exists(self, asset_id: str) -> bool:
        with self._lock:
            return asset_id in self._descriptors

    def list_assets(
        self,
        kind: Optional[MediaKind] = None,
        created_after: Optional[int] = None,
    ) -> list[MediaAsset]:
        """Descriptors matching the conjunctive filter, ordered by (created_at, id).

        ``created_after`` is strictly exclusive so pollers never see an
        asset twice.
        """
        with self._lock:
            snapshot = list(self._descriptors.values())
        out = [
            a
            for a in snapshot
            if (kind is None or a.kind == kind)
            and (created_after is None or a.created_at > created_after)
        ]
        out.sort(key=lambda a: (a.created_at, a.id))
        return out
