"""Content labels for webpages: actionability, knowledge, and emotion
scores learned from participant ratings and served over HTTP.
"""

from .boosting import (
    DEFAULT_BEST_PARAMS,
    GbtModel,
    GbtParams,
    default_param_grid,
    fit_gbt,
    predict_gbt,
    predict_gbt_matrix,
)
from .bundle import load_bundle, save_bundle
from .embed import (
    EmbeddingProviderSpec,
    EmbeddingVector,
    Standardizer,
    embed_tokens,
    fallback_spec,
    fit_standardizer,
    transform,
    transform_vector,
)
from .errors import ContentLabelsError
from .extract import (
    ExtractedDocument,
    InvalidReason,
    MarkerList,
    ValidityStatus,
    extract_document,
)
from .fetch import FetchConfig, RawFetchResult, default_fetch_config, fetch_page
from .learn import (
    Dimension,
    EvaluationReport,
    ModelBundle,
    RatingRecord,
    grid_search,
    group_split,
    ingest_ratings,
    train_all,
)
from .score import ContentLabels, ScoreStatus, score_document, score_url, to_display
from .service import ScoringService, build_server
from .stats import pearson, regularized_incomplete_beta
from .store import (
    MemoryLabelStore,
    SqliteLabelStore,
    canonicalize_url,
    needs_refresh,
    open_store,
    refresh_stale,
)

__version__ = "0.1.0"

__all__ = [
    "ContentLabels",
    "ContentLabelsError",
    "DEFAULT_BEST_PARAMS",
    "Dimension",
    "EmbeddingProviderSpec",
    "EmbeddingVector",
    "EvaluationReport",
    "ExtractedDocument",
    "FetchConfig",
    "GbtModel",
    "GbtParams",
    "InvalidReason",
    "MarkerList",
    "MemoryLabelStore",
    "ModelBundle",
    "RatingRecord",
    "RawFetchResult",
    "ScoreStatus",
    "ScoringService",
    "SqliteLabelStore",
    "Standardizer",
    "ValidityStatus",
    "build_server",
    "canonicalize_url",
    "default_fetch_config",
    "default_param_grid",
    "embed_tokens",
    "extract_document",
    "fallback_spec",
    "fetch_page",
    "fit_gbt",
    "fit_standardizer",
    "grid_search",
    "group_split",
    "ingest_ratings",
    "load_bundle",
    "needs_refresh",
    "open_store",
    "pearson",
    "predict_gbt",
    "predict_gbt_matrix",
    "refresh_stale",
    "regularized_incomplete_beta",
    "save_bundle",
    "score_document",
    "score_url",
    "to_display",
    "train_all",
    "transform",
    "transform_vector",
]
