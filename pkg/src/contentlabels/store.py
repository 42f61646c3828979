"""Label persistence keyed by canonical URL, with TTL- and content-hash
based staleness. Two interchangeable backends: an in-memory dict (tests,
ephemeral runs) and a single-file sqlite database.
"""

import json
import sqlite3
import threading
from dataclasses import dataclass
from typing import Callable, Optional
from urllib.parse import urlsplit, urlunsplit

from .errors import StorageUnavailable
from .score import ContentLabels, ScoreStatus, labels_from_dict, labels_to_dict

DEFAULT_TTL_SECONDS = 24 * 60 * 60.0

_DEFAULT_PORTS = {"http": "80", "https": "443"}


def canonicalize_url(url: str) -> str:
    """Conservative canonical form: lowercase scheme and host, strip the
    scheme's default port, drop the fragment. Path and query untouched."""
    parts = urlsplit(url)
    scheme = parts.scheme.lower()
    host = (parts.hostname or "").lower()
    if parts.port is not None and str(parts.port) != _DEFAULT_PORTS.get(scheme):
        host = f"{host}:{parts.port}"
    userinfo = ""
    if parts.username:
        userinfo = parts.username
        if parts.password:
            userinfo += f":{parts.password}"
        userinfo += "@"
    return urlunsplit((scheme, userinfo + host, parts.path, parts.query, ""))


@dataclass
class StoreEntry:
    url: str  # canonical
    labels: ContentLabels
    ttl: float = DEFAULT_TTL_SECONDS


class MemoryLabelStore:
    """Dict-backed store; atomic per-key writes under one lock."""

    def __init__(self):
        self._entries: dict[str, StoreEntry] = {}
        self._lock = threading.RLock()

    def put(self, labels: ContentLabels, ttl: Optional[float] = None) -> None:
        key = canonicalize_url(labels.url)
        with self._lock:
            self._entries[key] = StoreEntry(
                url=key, labels=labels,
                ttl=DEFAULT_TTL_SECONDS if ttl is None else ttl)

    def get(self, url: str) -> Optional[StoreEntry]:
        with self._lock:
            return self._entries.get(canonicalize_url(url))

    def entries(self) -> list[StoreEntry]:
        with self._lock:
            return list(self._entries.values())

    def count(self) -> int:
        with self._lock:
            return len(self._entries)

    def close(self) -> None:
        pass


class SqliteLabelStore:
    """Single-file sqlite store. One connection guarded by a lock; labels
    are stored as a JSON column so the schema never chases the dataclass."""

    def __init__(self, path):
        try:
            self._conn = sqlite3.connect(str(path), check_same_thread=False)
            self._conn.execute(
                "CREATE TABLE IF NOT EXISTS labels ("
                " url TEXT PRIMARY KEY,"
                " ttl REAL NOT NULL,"
                " payload TEXT NOT NULL)"
            )
            self._conn.commit()
        except sqlite3.Error as exc:
            raise StorageUnavailable(f"cannot open label store at {path}: {exc}") from exc
        self._lock = threading.Lock()

    def put(self, labels: ContentLabels, ttl: Optional[float] = None) -> None:
        key = canonicalize_url(labels.url)
        payload = json.dumps(labels_to_dict(labels))
        row_ttl = DEFAULT_TTL_SECONDS if ttl is None else ttl
        try:
            with self._lock:
                self._conn.execute(
                    "INSERT OR REPLACE INTO labels (url, ttl, payload) VALUES (?, ?, ?)",
                    (key, row_ttl, payload),
                )
                self._conn.commit()
        except sqlite3.Error as exc:
            raise StorageUnavailable(str(exc)) from exc

    def get(self, url: str) -> Optional[StoreEntry]:
        key = canonicalize_url(url)
        try:
            with self._lock:
                row = self._conn.execute(
                    "SELECT url, ttl, payload FROM labels WHERE url = ?", (key,)
                ).fetchone()
        except sqlite3.Error as exc:
            raise StorageUnavailable(str(exc)) from exc
        if row is None:
            return None
        return StoreEntry(url=row[0], labels=labels_from_dict(json.loads(row[2])),
                          ttl=row[1])

    def entries(self) -> list[StoreEntry]:
        try:
            with self._lock:
                rows = self._conn.execute(
                    "SELECT url, ttl, payload FROM labels ORDER BY url"
                ).fetchall()
        except sqlite3.Error as exc:
            raise StorageUnavailable(str(exc)) from exc
        return [
            StoreEntry(url=r[0], labels=labels_from_dict(json.loads(r[2])), ttl=r[1])
            for r in rows
        ]

    def count(self) -> int:
        try:
            with self._lock:
                return int(self._conn.execute("SELECT COUNT(*) FROM labels").fetchone()[0])
        except sqlite3.Error as exc:
            raise StorageUnavailable(str(exc)) from exc

    def close(self) -> None:
        with self._lock:
            self._conn.close()


def open_store(path: Optional[str] = None):
    """Path -> sqlite store; no path -> in-memory store."""
    if path is None or path == ":memory:":
        return MemoryLabelStore()
    return SqliteLabelStore(path)


def needs_refresh(entry: StoreEntry, now: float,
                  current_hash: Optional[str] = None) -> bool:
    """Stale when older than its TTL, or when the page's current extracted
    text hashes differently than at scoring time."""
    if now - entry.labels.scored_at > entry.ttl:
        return True
    if current_hash is not None and current_hash != entry.labels.content_hash:
        return True
    return False


def refresh_stale(store, now: float,
                  rescorer: Callable[[str], ContentLabels]) -> int:
    """Re-score every TTL-stale entry; returns how many were re-scored.

    A failing rescorer marks just that entry Error (stamped at `now`, so
    an immediate second sweep does not retry it) and the sweep continues.
    """
    refreshed = 0
    for entry in store.entries():
        if not needs_refresh(entry, now):
            continue
        try:
            labels = rescorer(entry.labels.url)
        except Exception as exc:
            labels = ContentLabels(
                url=entry.labels.url,
                status=ScoreStatus.ERROR,
                reason=f"refresh_failed:{type(exc).__name__}",
                model_version=entry.labels.model_version,
                scored_at=now,
            )
            store.put(labels, ttl=entry.ttl)
            continue
        store.put(labels, ttl=entry.ttl)
        refreshed += 1
    return refreshed


def export_jsonl(store, stream) -> int:
    """One JSON object per stored entry; returns the number written."""
    written = 0
    for entry in store.entries():
        record = {"url": entry.url, "ttl": entry.ttl,
                  "labels": labels_to_dict(entry.labels)}
        stream.write(json.dumps(record) + "\n")
        written += 1
    return written
