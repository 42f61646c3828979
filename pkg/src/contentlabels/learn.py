"""Training pipeline: rating ingestion, participant-grouped splitting,
hyperparameter grid search with grouped cross-validation, and end-to-end
model fitting with Pearson evaluation on a held-out split.

All splitting is by participant so that one person's ratings never appear
on both sides of a train/test or cross-validation boundary.
"""

import csv
import math
import random
import time
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .boosting import (
    DEFAULT_BEST_PARAMS,
    GbtModel,
    GbtParams,
    default_param_grid,
    fit_gbt,
    predict_gbt_matrix,
)
from .embed import (
    EmbeddingProviderSpec,
    Standardizer,
    embed_tokens,
    fit_standardizer,
    transform,
)
from .errors import (
    ConstantInput,
    FileMissing,
    LengthMismatch,
    MissingDimension,
    ParseError,
    TooFewGroups,
)
from .stats import pearson

RATING_MIN = 1
RATING_MAX = 6
DEFAULT_TRAIN_FRACTION = 0.8
DEFAULT_CV_FOLDS = 5

RATINGS_CSV_COLUMNS = (
    "participant_id",
    "url",
    "actionability",
    "knowledge",
    "positive_emotion",
    "negative_emotion",
)


class Dimension(str, Enum):
    ACTIONABILITY = "actionability"
    KNOWLEDGE = "knowledge"
    EMOTION = "emotion"


@dataclass(frozen=True)
class RatingRecord:
    participant_id: str
    url: str
    actionability: Optional[int] = None
    knowledge: Optional[int] = None
    positive_emotion: Optional[int] = None
    negative_emotion: Optional[int] = None

    def __post_init__(self):
        for name in ("actionability", "knowledge", "positive_emotion", "negative_emotion"):
            value = getattr(self, name)
            if value is not None and not (RATING_MIN <= value <= RATING_MAX):
                raise ValueError(f"{name}={value} outside the 1-6 rating scale")
        if all(
            getattr(self, name) is None
            for name in ("actionability", "knowledge", "positive_emotion", "negative_emotion")
        ):
            raise ValueError("a rating record must carry at least one rating")
        if (self.positive_emotion is None) != (self.negative_emotion is None):
            raise ValueError("positive and negative emotion must be rated together")

    @property
    def emotion(self) -> Optional[int]:
        """Bipolar emotion target: positive minus negative, in [-5, 5]."""
        if self.positive_emotion is None:
            return None
        return self.positive_emotion - self.negative_emotion


@dataclass(frozen=True)
class RowDiagnostic:
    row: int  # 1-based data-row index (header excluded)
    message: str


@dataclass
class IngestResult:
    records: list[RatingRecord]
    diagnostics: list[RowDiagnostic]


def _parse_rating_field(raw: str, name: str) -> Optional[int]:
    raw = raw.strip()
    if raw == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name}={raw!r} is not an integer") from None


def ingest_ratings(path) -> IngestResult:
    """Read a ratings CSV; invalid rows become diagnostics, not records.

    The file must be UTF-8 CSV with the exact header
    participant_id,url,actionability,knowledge,positive_emotion,negative_emotion
    and empty fields meaning "absent".
    """
    try:
        handle = open(path, "r", encoding="utf-8", newline="")
    except FileNotFoundError as exc:
        raise FileMissing(str(path)) from exc

    records: list[RatingRecord] = []
    diagnostics: list[RowDiagnostic] = []
    with handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError(f"{path}: empty file") from None
        if tuple(h.strip() for h in header) != RATINGS_CSV_COLUMNS:
            raise ParseError(
                f"{path}: expected header {','.join(RATINGS_CSV_COLUMNS)}, got {','.join(header)}"
            )
        for row_index, row in enumerate(reader, start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(RATINGS_CSV_COLUMNS):
                diagnostics.append(RowDiagnostic(row_index, f"expected {len(RATINGS_CSV_COLUMNS)} fields, got {len(row)}"))
                continue
            participant_id, url = row[0].strip(), row[1].strip()
            try:
                if not participant_id or not url:
                    raise ValueError("participant_id and url must be non-empty")
                record = RatingRecord(
                    participant_id=participant_id,
                    url=url,
                    actionability=_parse_rating_field(row[2], "actionability"),
                    knowledge=_parse_rating_field(row[3], "knowledge"),
                    positive_emotion=_parse_rating_field(row[4], "positive_emotion"),
                    negative_emotion=_parse_rating_field(row[5], "negative_emotion"),
                )
            except ValueError as exc:
                diagnostics.append(RowDiagnostic(row_index, str(exc)))
                continue
            records.append(record)
    return IngestResult(records=records, diagnostics=diagnostics)


@dataclass(frozen=True)
class TrainingExample:
    features: np.ndarray
    target: float
    participant_id: str
    url: str
    dimension: Dimension


def split_participants(participant_ids: Iterable[str], train_fraction: float,
                       seed: int) -> tuple[set, set]:
    """Deterministic participant partition: distinct ids are shuffled with
    a seeded PRNG and the first ceil(train_fraction * G) go to train."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    ids = sorted(set(participant_ids))
    if len(ids) < 2:
        raise TooFewGroups(f"need at least 2 participants, got {len(ids)}")
    rng = random.Random(seed)
    rng.shuffle(ids)
    n_train = math.ceil(train_fraction * len(ids))
    return set(ids[:n_train]), set(ids[n_train:])


def group_split(examples: Sequence, train_fraction: float, seed: int):
    """Split examples so each participant lands entirely on one side."""
    train_ids, _ = split_participants(
        (ex.participant_id for ex in examples), train_fraction, seed
    )
    train = [ex for ex in examples if ex.participant_id in train_ids]
    test = [ex for ex in examples if ex.participant_id not in train_ids]
    return train, test


def _fold_assignment(participant_ids: Iterable[str], k_folds: int, seed: int) -> dict:
    """participant -> fold index; contiguous chunks of a seeded shuffle."""
    ids = sorted(set(participant_ids))
    if len(ids) < k_folds:
        raise TooFewGroups(f"{len(ids)} participants cannot fill {k_folds} folds")
    rng = random.Random(seed)
    rng.shuffle(ids)
    base, extra = divmod(len(ids), k_folds)
    assignment = {}
    start = 0
    for fold in range(k_folds):
        size = base + (1 if fold < extra else 0)
        for pid in ids[start : start + size]:  # noqa: E203
            assignment[pid] = fold
        start += size
    return assignment


def _stack(examples: Sequence[TrainingExample]):
    X = np.stack([ex.features for ex in examples]).astype(np.float64)
    y = np.asarray([ex.target for ex in examples], dtype=np.float64)
    return X, y


def _fold_score(preds, truth) -> float:
    try:
        r, _ = pearson(preds, truth)
    except (ConstantInput, LengthMismatch):
        return 0.0
    return r


def grid_search(examples: Sequence[TrainingExample], grid: Sequence[GbtParams],
                k_folds: int = DEFAULT_CV_FOLDS, seed: int = 0):
    """Exhaustive search over `grid` with participant-grouped k-fold CV.

    Each combination is scored by the mean held-out-fold Pearson r; ties
    break toward fewer estimators, then lower depth, then lower learning
    rate. Returns (best_params, {params: mean_r}).
    """
    grid = list(grid)
    if not grid:
        raise ValueError("parameter grid is empty")
    if k_folds < 2:
        raise ValueError(f"k_folds must be >= 2, got {k_folds}")
    assignment = _fold_assignment((ex.participant_id for ex in examples), k_folds, seed)

    # rows keep their input order on both sides of every fold boundary, so a
    # recomputation from the same examples reproduces these scores bit for bit
    fold_of = np.asarray([assignment[ex.participant_id] for ex in examples])

    X, y = _stack(examples)
    cv_scores: dict[GbtParams, float] = {}
    for params in grid:
        scores = []
        for fold in range(k_folds):
            held = np.flatnonzero(fold_of == fold)
            rest = np.flatnonzero(fold_of != fold)
            model = fit_gbt(X[rest], y[rest], params, seed=seed)
            preds = predict_gbt_matrix(model, X[held])
            scores.append(_fold_score(preds, y[held]))
        cv_scores[params] = float(np.mean(scores))

    best = min(
        cv_scores,
        key=lambda p: (-cv_scores[p], p.n_estimators, p.max_depth, p.learning_rate),
    )
    return best, cv_scores


@dataclass(frozen=True)
class DimensionEval:
    pearson_r: float
    p_value: float
    n_test: int


@dataclass(frozen=True)
class EvaluationReport:
    per_dimension: dict
    split_seed: int
    train_fraction: float


@dataclass
class ModelBundle:
    standardizer: Standardizer
    models: dict
    provider_spec: EmbeddingProviderSpec
    best_params: dict
    report: EvaluationReport
    version: str
    trained_at: float


def build_examples(ratings: Sequence[RatingRecord], vectors_by_url: dict) -> dict:
    """Per-dimension example lists from ratings whose URL has a vector."""
    per_dim: dict = {dim: [] for dim in Dimension}
    for record in ratings:
        vec = vectors_by_url.get(record.url)
        if vec is None:
            continue
        if record.actionability is not None:
            per_dim[Dimension.ACTIONABILITY].append(TrainingExample(
                vec, float(record.actionability), record.participant_id,
                record.url, Dimension.ACTIONABILITY))
        if record.knowledge is not None:
            per_dim[Dimension.KNOWLEDGE].append(TrainingExample(
                vec, float(record.knowledge), record.participant_id,
                record.url, Dimension.KNOWLEDGE))
        if record.emotion is not None:
            per_dim[Dimension.EMOTION].append(TrainingExample(
                vec, float(record.emotion), record.participant_id,
                record.url, Dimension.EMOTION))
    return per_dim


def _default_resolver(markers=None, stoplist=None, fetch_config=None):
    from .extract import extract_document
    from .fetch import fetch_page
    from .errors import FetchError

    def resolve(url: str):
        try:
            raw = fetch_page(url, fetch_config)
        except FetchError:
            return None
        doc = extract_document(url, raw, markers=markers, stoplist=stoplist)
        return list(doc.cleaned_tokens) if doc.validity.valid else None

    return resolve


def train_all(ratings: Sequence[RatingRecord], provider_spec: EmbeddingProviderSpec,
              split_seed: int, *,
              resolve_tokens: Optional[Callable[[str], Optional[list]]] = None,
              grid: Optional[Sequence[GbtParams]] = None,
              k_folds: int = DEFAULT_CV_FOLDS,
              train_fraction: float = DEFAULT_TRAIN_FRACTION,
              fast: bool = False) -> ModelBundle:
    """Train all three dimension models and assemble a ModelBundle.

    Page text is resolved per unique URL through `resolve_tokens` (by
    default, live fetch + extraction; pages that fail validity gating are
    dropped). Each page is embedded once and the vector reused across
    dimensions. The standardizer is fit on training-split rows only. With
    fast=True the stock best parameters are applied to every dimension and
    the grid search is skipped.
    """
    from .bundle import compute_bundle_version

    if resolve_tokens is None:
        resolve_tokens = _default_resolver()

    urls_in_order: list[str] = []
    seen = set()
    for record in ratings:
        if record.url not in seen:
            seen.add(record.url)
            urls_in_order.append(record.url)

    vectors_by_url: dict = {}
    for url in urls_in_order:
        tokens = resolve_tokens(url)
        if tokens:
            vectors_by_url[url] = embed_tokens(tokens, provider_spec).values

    per_dim = build_examples(ratings, vectors_by_url)
    for dim in Dimension:
        if not per_dim[dim]:
            raise MissingDimension(f"no usable examples for dimension {dim.value}")

    all_participants = {
        ex.participant_id for examples in per_dim.values() for ex in examples
    }
    train_ids, _ = split_participants(all_participants, train_fraction, split_seed)

    train_url_set = {
        ex.url
        for examples in per_dim.values()
        for ex in examples
        if ex.participant_id in train_ids
    }
    # deterministic first-appearance order of the ratings file
    train_urls = [u for u in urls_in_order if u in train_url_set]
    standardizer = fit_standardizer(
        np.stack([vectors_by_url[u] for u in train_urls])
    )

    models: dict = {}
    best_params: dict = {}
    per_dimension_eval: dict = {}
    for dim in Dimension:
        examples = per_dim[dim]
        train_examples = [ex for ex in examples if ex.participant_id in train_ids]
        test_examples = [ex for ex in examples if ex.participant_id not in train_ids]

        X_train, y_train = _stack(train_examples)
        X_train = transform(X_train, standardizer)

        if fast:
            best = DEFAULT_BEST_PARAMS
        else:
            std_train = [
                TrainingExample(x, ex.target, ex.participant_id, ex.url, dim)
                for x, ex in zip(X_train, train_examples)
            ]
            best, _ = grid_search(std_train, grid or default_param_grid(),
                                  k_folds=k_folds, seed=split_seed)
        model = fit_gbt(X_train, y_train, best, seed=split_seed)

        X_test, y_test = _stack(test_examples)
        preds = predict_gbt_matrix(model, transform(X_test, standardizer))
        r, p = pearson(preds, y_test)

        models[dim] = model
        best_params[dim] = best
        per_dimension_eval[dim] = DimensionEval(pearson_r=r, p_value=p,
                                                n_test=len(test_examples))

    report = EvaluationReport(per_dimension=per_dimension_eval,
                              split_seed=split_seed,
                              train_fraction=train_fraction)
    bundle = ModelBundle(
        standardizer=standardizer,
        models=models,
        provider_spec=provider_spec,
        best_params=best_params,
        report=report,
        version="",
        trained_at=time.time(),
    )
    bundle.version = compute_bundle_version(bundle)
    return bundle


def evaluate_bundle(ratings: Sequence[RatingRecord], bundle: ModelBundle, *,
                    resolve_tokens: Optional[Callable[[str], Optional[list]]] = None,
                    ) -> dict:
    """Predicted/observed pairs on the bundle's held-out participant split.

    The split is re-derived from the seed and fraction recorded in the
    bundle's report, so evaluating the training CSV reproduces the split
    used at fit time. Returns {dimension: (predictions, targets)}.
    """
    if resolve_tokens is None:
        resolve_tokens = _default_resolver()

    vectors_by_url: dict = {}
    for record in ratings:
        if record.url in vectors_by_url:
            continue
        tokens = resolve_tokens(record.url)
        vectors_by_url[record.url] = (
            embed_tokens(tokens, bundle.provider_spec).values if tokens else None
        )
    vectors_by_url = {u: v for u, v in vectors_by_url.items() if v is not None}

    per_dim = build_examples(ratings, vectors_by_url)
    all_participants = {
        ex.participant_id for examples in per_dim.values() for ex in examples
    }
    _, test_ids = split_participants(all_participants,
                                     bundle.report.train_fraction,
                                     bundle.report.split_seed)
    pairs: dict = {}
    for dim in Dimension:
        held = [ex for ex in per_dim[dim] if ex.participant_id in test_ids]
        if not held:
            continue
        X, y = _stack(held)
        preds = predict_gbt_matrix(bundle.models[dim],
                                   transform(X, bundle.standardizer))
        pairs[dim] = (preds, y)
    return pairs
