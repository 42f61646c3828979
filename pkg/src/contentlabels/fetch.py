"""HTTP retrieval of raw webpage bytes with browser-like request headers.

Only the base HTML source is fetched; there is no JavaScript rendering.
Requests carry a desktop-browser user agent because some origins serve
block pages to obvious non-browser clients. Proxy settings are picked up
from HTTP_PROXY / HTTPS_PROXY environment variables (requests' default
trust_env behavior).
"""

import time
from dataclasses import dataclass
from typing import Optional

import requests

from .errors import HttpStatusError, NetworkError, NotHtml, TooManyRedirects

# Fixed, versioned desktop-browser user agent. Overridable per config.
DEFAULT_USER_AGENT = (
    "Mozilla/5.0 (Windows NT 10.0; Win64; x64) AppleWebKit/537.36 "
    "(KHTML, like Gecko) Chrome/120.0.0.0 Safari/537.36"
)

DEFAULT_EXTRA_HEADERS = (
    ("Accept", "text/html,application/xhtml+xml,application/xml;q=0.9,*/*;q=0.8"),
    ("Accept-Language", "en-US,en;q=0.9"),
)

DEFAULT_TIMEOUT_SECONDS = 15.0
DEFAULT_MAX_BODY_BYTES = 2 * 1024 * 1024
DEFAULT_MAX_REDIRECTS = 5

_HTML_MEDIA_TYPES = frozenset({"text/html", "application/xhtml+xml"})
_CHUNK_SIZE = 65536


@dataclass(frozen=True)
class FetchConfig:
    user_agent: str = DEFAULT_USER_AGENT
    extra_headers: tuple = DEFAULT_EXTRA_HEADERS
    timeout: float = DEFAULT_TIMEOUT_SECONDS
    max_body_bytes: int = DEFAULT_MAX_BODY_BYTES
    max_redirects: int = DEFAULT_MAX_REDIRECTS

    def __post_init__(self):
        if not self.user_agent:
            raise ValueError("user_agent must be non-empty")
        if not self.timeout > 0:
            raise ValueError(f"timeout must be > 0, got {self.timeout}")
        if self.max_body_bytes < 1024:
            raise ValueError(f"max_body_bytes must be >= 1024, got {self.max_body_bytes}")
        if self.max_redirects < 0:
            raise ValueError(f"max_redirects must be >= 0, got {self.max_redirects}")


@dataclass(frozen=True)
class RawFetchResult:
    url: str
    final_url: str
    status_code: int
    content_type: str
    body: bytes
    fetched_at: float = 0.0
    truncated: bool = False


def default_fetch_config() -> FetchConfig:
    """The documented defaults: desktop UA, 15 s timeout, 2 MiB cap, 5 redirects."""
    return FetchConfig()


def _media_type(content_type_header: str) -> str:
    return content_type_header.split(";", 1)[0].strip().lower()


def fetch_page(url: str, config: Optional[FetchConfig] = None) -> RawFetchResult:
    """GET a page, following at most config.max_redirects redirects and
    reading at most config.max_body_bytes of body.

    Raises NetworkError for DNS/connect/timeout problems, HttpStatusError
    for status >= 400, NotHtml when the response declares a non-HTML
    content type, and TooManyRedirects when the redirect cap is exceeded.
    """
    config = config if config is not None else default_fetch_config()
    headers = {"User-Agent": config.user_agent}
    headers.update(dict(config.extra_headers))

    session = requests.Session()
    session.max_redirects = config.max_redirects
    try:
        resp = session.get(
            url,
            headers=headers,
            timeout=config.timeout,
            stream=True,
            allow_redirects=True,
        )
    except requests.TooManyRedirects as exc:
        raise TooManyRedirects(str(exc)) from exc
    except requests.RequestException as exc:
        raise NetworkError(f"{url}: {exc}") from exc

    with resp:
        if resp.status_code >= 400:
            raise HttpStatusError(resp.status_code, url)

        content_type_header = resp.headers.get("Content-Type", "")
        media_type = _media_type(content_type_header)
        if media_type and media_type not in _HTML_MEDIA_TYPES:
            raise NotHtml(media_type)

        body = bytearray()
        truncated = False
        try:
            for chunk in resp.iter_content(chunk_size=_CHUNK_SIZE):
                body.extend(chunk)
                if len(body) > config.max_body_bytes:
                    truncated = True
                    del body[config.max_body_bytes :]  # noqa: E203
                    break
        except requests.RequestException as exc:
            raise NetworkError(f"{url}: body read failed: {exc}") from exc

        return RawFetchResult(
            url=url,
            final_url=resp.url,
            status_code=resp.status_code,
            content_type=media_type,
            body=bytes(body),
            fetched_at=time.time(),
            truncated=truncated,
        )
