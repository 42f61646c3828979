"""Scoring orchestration: fetch -> extract -> embed -> predict, producing
ContentLabels with both raw scores (rating-scale units) and 0-100 display
scores. Content problems never raise; they are encoded in the status.
"""

import time
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from typing import Optional

from .boosting import predict_gbt
from .embed import embed_tokens, transform_vector
from .errors import (
    FetchError,
    HttpStatusError,
    NotHtml,
    OutOfRange,
    ProviderUnavailable,
    TooManyRedirects,
)
from .extract import ExtractedDocument, extract_document
from .fetch import fetch_page
from .learn import Dimension, ModelBundle

RAW_RANGE = {
    Dimension.ACTIONABILITY: (1.0, 6.0),
    Dimension.KNOWLEDGE: (1.0, 6.0),
    Dimension.EMOTION: (-5.0, 5.0),
}


class ScoreStatus(str, Enum):
    SCORED = "scored"
    INVALID = "invalid"
    ERROR = "error"


@dataclass(frozen=True)
class ContentLabels:
    url: str
    status: ScoreStatus
    model_version: str
    scored_at: float
    reason: Optional[str] = None
    actionability_raw: Optional[float] = None
    knowledge_raw: Optional[float] = None
    emotion_raw: Optional[float] = None
    actionability_display: Optional[float] = None
    knowledge_display: Optional[float] = None
    emotion_display: Optional[float] = None
    content_hash: Optional[str] = None

    def __post_init__(self):
        scored = self.status is ScoreStatus.SCORED
        raw_fields = (self.actionability_raw, self.knowledge_raw, self.emotion_raw)
        if scored and any(v is None for v in raw_fields):
            raise ValueError("scored labels must carry all three raw scores")
        if not scored and any(v is not None for v in raw_fields):
            raise ValueError(f"status {self.status.value} must not carry scores")
        if not scored and self.reason is None:
            raise ValueError(f"status {self.status.value} requires a reason")


def clamp(value: float, low: float, high: float) -> float:
    return low if value < low else high if value > high else value


def to_display(raw: float, dimension: Dimension) -> float:
    """Linear 0-100 rescaling of a raw score, rounded half-up to 1 decimal."""
    low, high = RAW_RANGE[dimension]
    if not low <= raw <= high:
        raise OutOfRange(f"{dimension.value} raw score {raw} outside [{low}, {high}]")
    scaled = (raw - low) / (high - low) * 100.0
    return float(Decimal(repr(scaled)).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


def score_document(doc: ExtractedDocument, bundle: ModelBundle,
                   now: Optional[float] = None) -> ContentLabels:
    """Score one extracted document against a trained bundle.

    Invalid documents get status Invalid with the gating reason and no
    scores. Raw predictions are clamped into their rating ranges before
    the display mapping.
    """
    if now is None:
        now = time.time()
    if not doc.validity.valid:
        return ContentLabels(
            url=doc.url,
            status=ScoreStatus.INVALID,
            reason=doc.validity.reason.value,
            model_version=bundle.version,
            scored_at=now,
            content_hash=doc.content_hash,
        )
    vector = embed_tokens(list(doc.cleaned_tokens), bundle.provider_spec).values
    vector = transform_vector(vector, bundle.standardizer)

    raw: dict = {}
    for dim in Dimension:
        low, high = RAW_RANGE[dim]
        raw[dim] = clamp(predict_gbt(bundle.models[dim], vector), low, high)
    return ContentLabels(
        url=doc.url,
        status=ScoreStatus.SCORED,
        model_version=bundle.version,
        scored_at=now,
        actionability_raw=raw[Dimension.ACTIONABILITY],
        knowledge_raw=raw[Dimension.KNOWLEDGE],
        emotion_raw=raw[Dimension.EMOTION],
        actionability_display=to_display(raw[Dimension.ACTIONABILITY], Dimension.ACTIONABILITY),
        knowledge_display=to_display(raw[Dimension.KNOWLEDGE], Dimension.KNOWLEDGE),
        emotion_display=to_display(raw[Dimension.EMOTION], Dimension.EMOTION),
        content_hash=doc.content_hash,
    )


def _error_labels(url: str, kind: str, bundle: ModelBundle, now: float) -> ContentLabels:
    return ContentLabels(url=url, status=ScoreStatus.ERROR, reason=kind,
                         model_version=bundle.version, scored_at=now)


def score_url(url: str, bundle: ModelBundle, *, config=None, markers=None,
              stoplist=None, now: Optional[float] = None) -> ContentLabels:
    """Fetch, extract, and score a URL. Fetch and provider failures become
    status Error with the kind in `reason`; nothing content-related raises.
    """
    if now is None:
        now = time.time()
    try:
        raw = fetch_page(url, config)
    except HttpStatusError as exc:
        return _error_labels(url, f"http_status:{exc.status_code}", bundle, now)
    except NotHtml:
        return _error_labels(url, "not_html", bundle, now)
    except TooManyRedirects:
        return _error_labels(url, "too_many_redirects", bundle, now)
    except FetchError:
        return _error_labels(url, "network", bundle, now)
    doc = extract_document(url, raw, markers=markers, stoplist=stoplist)
    try:
        return score_document(doc, bundle, now=now)
    except ProviderUnavailable:
        return _error_labels(url, "provider_unavailable", bundle, now)


def labels_to_dict(labels: ContentLabels) -> dict:
    return {
        "url": labels.url,
        "status": labels.status.value,
        "reason": labels.reason,
        "actionability_raw": labels.actionability_raw,
        "knowledge_raw": labels.knowledge_raw,
        "emotion_raw": labels.emotion_raw,
        "actionability_display": labels.actionability_display,
        "knowledge_display": labels.knowledge_display,
        "emotion_display": labels.emotion_display,
        "content_hash": labels.content_hash,
        "model_version": labels.model_version,
        "scored_at": labels.scored_at,
    }


def labels_from_dict(data: dict) -> ContentLabels:
    return ContentLabels(
        url=data["url"],
        status=ScoreStatus(data["status"]),
        reason=data.get("reason"),
        actionability_raw=data.get("actionability_raw"),
        knowledge_raw=data.get("knowledge_raw"),
        emotion_raw=data.get("emotion_raw"),
        actionability_display=data.get("actionability_display"),
        knowledge_display=data.get("knowledge_display"),
        emotion_display=data.get("emotion_display"),
        content_hash=data.get("content_hash"),
        model_version=data["model_version"],
        scored_at=data["scored_at"],
    )
