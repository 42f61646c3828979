"""HTTP scoring service.

Endpoints:

* ``POST /v1/scores`` — body ``{"urls": [...]}`` (1-20 URLs). Fresh cache
  entries are answered from the store; misses are fetched and scored
  inline in sync mode (per-URL time budget) or queued with a "pending"
  result in async mode. Response order matches request order.
* ``GET /v1/health`` — bundle version, store entry count, uptime.

Built on the standard library's threading HTTP server; responses carry
permissive CORS headers so a browser extension can call the service.
"""

import json
import logging
import threading
import time
from concurrent.futures import Future, ThreadPoolExecutor
from concurrent.futures import TimeoutError as FutureTimeoutError
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Optional

from .fetch import FetchConfig
from .learn import ModelBundle
from .score import ContentLabels, ScoreStatus, score_url
from .store import MemoryLabelStore, canonicalize_url, needs_refresh

MAX_URLS_PER_QUERY = 20
DEFAULT_SYNC_BUDGET_SECONDS = 10.0
DEFAULT_MAX_FETCH_CONCURRENCY = 8

log = logging.getLogger(__name__)


def labels_payload(labels: ContentLabels) -> dict:
    return {
        "actionability": {"raw": labels.actionability_raw,
                          "display": labels.actionability_display},
        "knowledge": {"raw": labels.knowledge_raw,
                      "display": labels.knowledge_display},
        "emotion": {"raw": labels.emotion_raw,
                    "display": labels.emotion_display},
    }


def result_payload(labels: ContentLabels) -> dict:
    result = {"url": labels.url, "status": labels.status.value}
    if labels.status is ScoreStatus.SCORED:
        result["labels"] = labels_payload(labels)
    else:
        result["reason"] = labels.reason
    return result


class ScoringService:
    """Orchestrates cache lookups and bounded-concurrency scoring."""

    def __init__(self, bundle: Optional[ModelBundle], store=None, *,
                 fetch_config: Optional[FetchConfig] = None,
                 markers=None, stoplist=None, sync: bool = True,
                 sync_budget_seconds: float = DEFAULT_SYNC_BUDGET_SECONDS,
                 max_fetch_concurrency: int = DEFAULT_MAX_FETCH_CONCURRENCY):
        self.bundle = bundle
        self.store = store if store is not None else MemoryLabelStore()
        self.fetch_config = fetch_config
        self.markers = markers
        self.stoplist = stoplist
        self.sync = sync
        self.sync_budget_seconds = sync_budget_seconds
        self.started_at = time.time()
        self._executor = ThreadPoolExecutor(max_workers=max_fetch_concurrency)
        self._inflight: dict[str, Future] = {}
        self._inflight_lock = threading.Lock()

    def close(self) -> None:
        self._executor.shutdown(wait=False)

    # -- scoring ---------------------------------------------------------

    def _score_and_store(self, url: str) -> ContentLabels:
        labels = score_url(url, self.bundle, config=self.fetch_config,
                           markers=self.markers, stoplist=self.stoplist)
        self.store.put(labels)
        return labels

    def _submit(self, url: str) -> Future:
        """One in-flight job per canonical URL; callers share the future."""
        key = canonicalize_url(url)
        with self._inflight_lock:
            existing = self._inflight.get(key)
            if existing is not None:
                return existing
            future = self._executor.submit(self._score_and_store, url)
            self._inflight[key] = future

            def _clear(_):
                with self._inflight_lock:
                    self._inflight.pop(key, None)

            future.add_done_callback(_clear)
            return future

    def handle_scores(self, body) -> tuple[int, dict]:
        """Returns (http_status, response_document)."""
        if not isinstance(body, dict) or not isinstance(body.get("urls"), list):
            return 400, {"error": "body must be a JSON object with a 'urls' list"}
        urls = body["urls"]
        if not urls or not all(isinstance(u, str) and u for u in urls):
            return 400, {"error": "'urls' must be a non-empty list of URL strings"}
        if len(urls) > MAX_URLS_PER_QUERY:
            return 400, {"error": f"at most {MAX_URLS_PER_QUERY} urls per query"}
        if self.bundle is None:
            return 503, {"error": "no model bundle loaded"}

        now = time.time()
        results: list = [None] * len(urls)
        waiting: list[tuple[int, Future]] = []
        for i, url in enumerate(urls):
            entry = self.store.get(url)
            if entry is not None and not needs_refresh(entry, now):
                results[i] = result_payload(entry.labels)
                continue
            future = self._submit(url)
            if self.sync:
                waiting.append((i, future))
            else:
                results[i] = {"url": url, "status": "pending"}

        for i, future in waiting:
            try:
                labels = future.result(timeout=self.sync_budget_seconds)
            except FutureTimeoutError:
                results[i] = {"url": urls[i], "status": "pending"}
            except Exception:
                log.exception("scoring %s failed", urls[i])
                results[i] = {"url": urls[i], "status": "error",
                              "reason": "internal"}
            else:
                results[i] = result_payload(labels)

        return 200, {"results": results, "model_version": self.bundle.version}

    def handle_health(self) -> tuple[int, dict]:
        document = {
            "status": "ok" if self.bundle is not None else "degraded",
            "model_version": self.bundle.version if self.bundle else None,
            "entries": self.store.count(),
            "uptime_seconds": time.time() - self.started_at,
        }
        return 200, document


class _Handler(BaseHTTPRequestHandler):
    service: ScoringService  # assigned on the subclass by build_server
    protocol_version = "HTTP/1.1"

    def _send(self, status: int, document: dict) -> None:
        body = json.dumps(document).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self._cors()
        self.end_headers()
        self.wfile.write(body)

    def _cors(self) -> None:
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")

    def do_OPTIONS(self):
        self.send_response(204)
        self._cors()
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        if self.path == "/v1/health":
            status, document = self.service.handle_health()
            self._send(status, document)
        else:
            self._send(404, {"error": "not found"})

    def do_POST(self):
        if self.path != "/v1/scores":
            self._send(404, {"error": "not found"})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            body = json.loads(self.rfile.read(length).decode("utf-8"))
        except (ValueError, UnicodeDecodeError):
            self._send(400, {"error": "malformed JSON body"})
            return
        status, document = self.service.handle_scores(body)
        self._send(status, document)

    def log_message(self, format, *args):  # route through logging, not stderr
        log.debug("%s - %s", self.address_string(), format % args)


def build_server(service: ScoringService, host: str = "127.0.0.1",
                 port: int = 8765) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {"service": service})
    server = ThreadingHTTPServer((host, port), handler)
    server.daemon_threads = True
    return server
