import json
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@dataclass
class Route:
    body: bytes = b""
    status: int = 200
    content_type: Optional[str] = "text/html; charset=utf-8"
    delay: float = 0.0
    redirect_to: Optional[str] = None
    headers: dict = field(default_factory=dict)


class FixtureServer:
    """Configurable local HTTP server for exercising the fetch pipeline.

    Tracks per-path hit counts, the headers of the last request per path,
    and the high-water mark of concurrently open requests.
    """

    def __init__(self):
        self.routes: dict[str, Route] = {}
        self.hits: dict[str, int] = {}
        self.last_request_headers: dict[str, dict] = {}
        self.post_bodies: dict[str, list] = {}
        self._active = 0
        self.max_concurrency = 0
        self._lock = threading.Lock()

        outer = self

        class Handler(BaseHTTPRequestHandler):
            protocol_version = "HTTP/1.1"

            def do_GET(self):
                with outer._lock:
                    outer.hits[self.path] = outer.hits.get(self.path, 0) + 1
                    outer.last_request_headers[self.path] = dict(self.headers.items())
                    outer._active += 1
                    outer.max_concurrency = max(outer.max_concurrency, outer._active)
                try:
                    route = outer.routes.get(self.path)
                    if route is None:
                        self.send_response(404)
                        self.send_header("Content-Type", "text/html")
                        self.send_header("Content-Length", "0")
                        self.end_headers()
                        return
                    if route.delay:
                        time.sleep(route.delay)
                    if route.redirect_to is not None:
                        self.send_response(route.status or 302)
                        self.send_header("Location", route.redirect_to)
                        self.send_header("Content-Length", "0")
                        self.end_headers()
                        return
                    self.send_response(route.status)
                    if route.content_type is not None:
                        self.send_header("Content-Type", route.content_type)
                    for name, value in route.headers.items():
                        self.send_header(name, value)
                    self.send_header("Content-Length", str(len(route.body)))
                    self.end_headers()
                    self.wfile.write(route.body)
                finally:
                    with outer._lock:
                        outer._active -= 1

            def do_POST(self):
                length = int(self.headers.get("Content-Length", "0"))
                payload = self.rfile.read(length)
                with outer._lock:
                    outer.hits[self.path] = outer.hits.get(self.path, 0) + 1
                    outer.post_bodies.setdefault(self.path, []).append(payload)
                route = outer.routes.get(self.path)
                if route is None:
                    self.send_response(404)
                    self.send_header("Content-Length", "0")
                    self.end_headers()
                    return
                self.send_response(route.status)
                if route.content_type is not None:
                    self.send_header("Content-Type", route.content_type)
                self.send_header("Content-Length", str(len(route.body)))
                self.end_headers()
                self.wfile.write(route.body)

            def log_message(self, *args):
                pass

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._server.daemon_threads = True
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()

    @property
    def base_url(self) -> str:
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}"

    def url(self, path: str) -> str:
        return self.base_url + path

    def add(self, path: str, body=b"", **kwargs) -> str:
        if isinstance(body, str):
            body = body.encode("utf-8")
        self.routes[path] = Route(body=body, **kwargs)
        return self.url(path)

    def add_file(self, path: str, fixture_name: str, **kwargs) -> str:
        return self.add(path, (FIXTURES / fixture_name).read_bytes(), **kwargs)

    def add_redirect(self, path: str, target: str, status: int = 302) -> str:
        self.routes[path] = Route(redirect_to=target, status=status)
        return self.url(path)

    def total_hits(self) -> int:
        with self._lock:
            return sum(self.hits.values())

    def reset_counters(self) -> None:
        with self._lock:
            self.hits.clear()
            self.last_request_headers.clear()
            self.max_concurrency = 0
            self._active = 0

    def close(self) -> None:
        self._server.shutdown()
        self._server.server_close()


@pytest.fixture
def fixture_server():
    server = FixtureServer()
    yield server
    server.close()


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def tiny_bundle():
    from contentlabels.bundle import load_bundle

    return load_bundle(FIXTURES / "tiny_bundle.json")


@pytest.fixture(scope="session")
def article_golden() -> dict:
    return json.loads((FIXTURES / "article1_golden.json").read_text("utf-8"))


@pytest.fixture(scope="session")
def article_scores_golden() -> dict:
    return json.loads((FIXTURES / "article1_scores.json").read_text("utf-8"))
