"""HTML header/paragraph extraction, cleaning, and validity gating.

The pipeline is: parse h1-h6 and p text out of the HTML, clean each
fragment, tokenize with stop-word removal, decide whether the page is
scorable at all (block pages, error pages, popup walls, too little text),
and cap the token stream at 200 tokens.
"""

import re
from dataclasses import dataclass
from enum import Enum
from hashlib import blake2b
from html.parser import HTMLParser
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

MIN_TOKENS = 10
MAX_TOKENS = 200

# "error"-style markers are only trusted near the top of the page so a long
# article that merely mentions errors is not invalidated.
ERROR_MARKER_WINDOW_TOKENS = 30

# one popup marker per this many tokens flags the page as popup text
POPUP_DENSITY_TOKENS = 50

_HEADER_TAGS = frozenset({"h1", "h2", "h3", "h4", "h5", "h6"})
_SKIP_TAGS = frozenset({"script", "style", "template"})

_DISALLOWED_CHARS = re.compile(r"[^\w\s.,!?'-]|_", flags=re.UNICODE)
_WHITESPACE_RUN = re.compile(r"\s+")
_EDGE_PUNCT = ".,!?'-"


class InvalidReason(str, Enum):
    EMPTY_DOCUMENT = "empty_document"
    ERROR_PAGE = "error_page"
    ANTI_SCRAPING = "anti_scraping"
    POPUP_TEXT = "popup_text"
    TOO_FEW_WORDS = "too_few_words"


@dataclass(frozen=True)
class ValidityStatus:
    valid: bool
    reason: Optional[InvalidReason] = None

    def __post_init__(self):
        if self.valid and self.reason is not None:
            raise ValueError("a valid status cannot carry a reason")
        if not self.valid and self.reason is None:
            raise ValueError("an invalid status must carry a reason")

    @classmethod
    def ok(cls) -> "ValidityStatus":
        return cls(valid=True)

    @classmethod
    def invalid(cls, reason: InvalidReason) -> "ValidityStatus":
        return cls(valid=False, reason=reason)


@dataclass(frozen=True)
class MarkerList:
    popup_markers: tuple = ("cookies", "blocked")
    error_markers: tuple = ("403", "404", "error")
    antiscrape_markers: tuple = (
        "using a security service to protect itself",
        "triggered the security solution",
    )

    def __post_init__(self):
        for group in (self.popup_markers, self.error_markers, self.antiscrape_markers):
            for marker in group:
                if not marker or marker != marker.lower():
                    raise ValueError(f"markers must be non-empty lowercase, got {marker!r}")

    @classmethod
    def from_files(cls, popup_path, error_path, antiscrape_path) -> "MarkerList":
        return cls(
            popup_markers=tuple(load_word_list(popup_path)),
            error_markers=tuple(load_word_list(error_path)),
            antiscrape_markers=tuple(load_word_list(antiscrape_path)),
        )


@dataclass(frozen=True)
class ExtractedDocument:
    url: str
    headers: tuple
    paragraphs: tuple
    cleaned_tokens: tuple
    content_hash: str
    validity: ValidityStatus


def load_word_list(path) -> list[str]:
    """One lowercase entry per line; blank lines ignored."""
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    return [line.strip().lower() for line in lines if line.strip()]


def load_stop_words(path=None) -> frozenset:
    """The shipped ~170-entry English stop-word list, or one from a file."""
    if path is not None:
        return frozenset(load_word_list(path))
    text = resources.files("contentlabels").joinpath("data/stop_words.txt").read_text("utf-8")
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


class _BlockTextParser(HTMLParser):
    """Streams h1-h6 and p text blocks in document order.

    script/style/template content is dropped; markup nested inside a block
    is flattened to its text with tag boundaries becoming spaces. A new
    block tag implicitly closes an open block, which approximates how
    browsers recover from unclosed <p> tags.
    """

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.blocks: list[tuple[str, str]] = []  # (kind, text), kind "h" or "p"
        self._current: Optional[str] = None
        self._chunks: list[str] = []
        self._skip_depth = 0

    def _flush(self):
        if self._current is not None:
            text = _WHITESPACE_RUN.sub(" ", "".join(self._chunks)).strip()
            if text:
                self.blocks.append((self._current, text))
        self._current = None
        self._chunks = []

    def handle_starttag(self, tag, attrs):
        if tag in _SKIP_TAGS:
            self._skip_depth += 1
            return
        if tag in _HEADER_TAGS:
            self._flush()
            self._current = "h"
        elif tag == "p":
            self._flush()
            self._current = "p"
        elif self._current is not None:
            self._chunks.append(" ")

    def handle_endtag(self, tag):
        if tag in _SKIP_TAGS:
            self._skip_depth = max(0, self._skip_depth - 1)
            return
        if tag in _HEADER_TAGS or tag == "p":
            self._flush()
        elif self._current is not None:
            self._chunks.append(" ")

    def handle_data(self, data):
        if self._current is not None and self._skip_depth == 0:
            self._chunks.append(data)

    def close(self):
        super().close()
        self._flush()


def parse_html(html) -> tuple[list[str], list[str]]:
    """Header and paragraph text of an HTML document, in document order.

    Accepts bytes (decoded as UTF-8, lossily) or text. Malformed input is
    parsed best-effort; anything unparseable yields empty lists.
    """
    if isinstance(html, (bytes, bytearray)):
        html = bytes(html).decode("utf-8", errors="replace")
    parser = _BlockTextParser()
    try:
        parser.feed(html)
        parser.close()
    except Exception:
        return [], []
    headers = [text for kind, text in parser.blocks if kind == "h"]
    paragraphs = [text for kind, text in parser.blocks if kind == "p"]
    return headers, paragraphs


def clean_text(raw: str) -> str:
    """Drop characters outside {letters, digits, whitespace, . , ! ? ' -}
    and collapse whitespace runs; case is preserved."""
    kept = _DISALLOWED_CHARS.sub("", raw)
    return _WHITESPACE_RUN.sub(" ", kept).strip()


def tokenize_and_remove_stop_words(cleaned: str, stoplist) -> list[str]:
    """Whitespace tokens with edge punctuation stripped and stop words removed."""
    tokens = []
    for piece in cleaned.split():
        token = piece.strip(_EDGE_PUNCT)
        if token and token.lower() not in stoplist:
            tokens.append(token)
    return tokens


def assess_validity(headers, paragraphs, tokens, markers: MarkerList) -> ValidityStatus:
    """First-matched verdict in the fixed precedence order: empty document,
    error page, anti-scraping block, popup wall, too few words."""
    if not headers and not paragraphs:
        return ValidityStatus.invalid(InvalidReason.EMPTY_DOCUMENT)

    raw_text = " ".join(list(headers) + list(paragraphs))
    lowered = raw_text.lower()

    window = " ".join(lowered.split()[:ERROR_MARKER_WINDOW_TOKENS])
    if any(marker in window for marker in markers.error_markers):
        return ValidityStatus.invalid(InvalidReason.ERROR_PAGE)

    if any(marker in lowered for marker in markers.antiscrape_markers):
        return ValidityStatus.invalid(InvalidReason.ANTI_SCRAPING)

    popup_hits = sum(lowered.count(m) for m in markers.popup_markers)
    if popup_hits > 0 and popup_hits * POPUP_DENSITY_TOKENS >= len(tokens):
        return ValidityStatus.invalid(InvalidReason.POPUP_TEXT)

    if len(tokens) < MIN_TOKENS:
        return ValidityStatus.invalid(InvalidReason.TOO_FEW_WORDS)

    return ValidityStatus.ok()


def gate_tokens(tokens) -> list[str]:
    """At most the first 200 tokens; shorter streams pass through unchanged."""
    tokens = list(tokens)
    if len(tokens) > MAX_TOKENS:
        return tokens[:MAX_TOKENS]
    return tokens


def content_hash_of(raw_text: str) -> str:
    """64-bit BLAKE2b hex digest of the pre-cleaning extracted text."""
    return blake2b(raw_text.encode("utf-8"), digest_size=8).hexdigest()


def extract_document(url: str, raw, markers: Optional[MarkerList] = None,
                     stoplist: Optional[Iterable[str]] = None) -> ExtractedDocument:
    """Full extraction pipeline for one fetched page.

    `raw` is a RawFetchResult (anything with a .body works), or the HTML
    itself as str or bytes. All failure modes land in the validity
    verdict; nothing raises for bad content.
    """
    markers = markers if markers is not None else MarkerList()
    stoplist = stoplist if stoplist is not None else load_stop_words()

    body = raw if isinstance(raw, (str, bytes)) else raw.body
    headers, paragraphs = parse_html(body)
    raw_text = " ".join(headers + paragraphs)
    digest = content_hash_of(raw_text)

    cleaned = " ".join(clean_text(fragment) for fragment in headers + paragraphs)
    tokens = tokenize_and_remove_stop_words(cleaned, stoplist)
    validity = assess_validity(headers, paragraphs, tokens, markers)
    if validity.valid:
        tokens = gate_tokens(tokens)

    return ExtractedDocument(
        url=url,
        headers=tuple(headers),
        paragraphs=tuple(paragraphs),
        cleaned_tokens=tuple(tokens),
        content_hash=digest,
        validity=validity,
    )
