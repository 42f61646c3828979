"""Token embeddings behind a pluggable provider, plus feature standardization.

Two providers are supported:

* ``hashed-tf-fallback`` — deterministic signed term-frequency hashing.
  Each token is hashed with keyed 64-bit BLAKE2b (fixed key, documented
  below); bucket = hash mod dim, sign = +1 when the high bit is 0 and -1
  otherwise; signed counts are accumulated and divided by the token count.
  Runs everywhere with no model download.
* ``transformer-external`` — delegates to a pretrained transformer made
  available either over HTTP (``parameters["endpoint_url"]``, POST
  ``{"tokens": [...]}`` returning per-token ``{"vectors": [[...], ...]}``)
  or as a local model directory (``parameters["model_path"]``, loaded via
  the ``transformers`` package). Token representations are mean-pooled to
  a single vector.
"""

from dataclasses import dataclass, field
from hashlib import blake2b
from typing import Mapping

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyInput,
    NonFiniteInput,
    ProviderUnavailable,
    TooFewRows,
)

FALLBACK_PROVIDER_ID = "hashed-tf-fallback"
EXTERNAL_PROVIDER_ID = "transformer-external"
FALLBACK_DIM_DEFAULT = 256
EXTERNAL_DIM_DEFAULT = 768
FALLBACK_PROVIDER_VERSION = "1"

# Fixed key for the fallback token hash. Changing it changes every vector,
# so it is part of the provider version contract.
_HASH_KEY = b"contentlabels-tf-v1"

_ZERO_STD_FLOOR = 1e-12


@dataclass(frozen=True)
class EmbeddingProviderSpec:
    provider_id: str
    dim: int
    parameters: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.provider_id not in (FALLBACK_PROVIDER_ID, EXTERNAL_PROVIDER_ID):
            raise ValueError(f"unknown provider_id {self.provider_id!r}")
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")


def fallback_spec(dim: int = FALLBACK_DIM_DEFAULT) -> EmbeddingProviderSpec:
    return EmbeddingProviderSpec(FALLBACK_PROVIDER_ID, dim)


@dataclass(frozen=True)
class EmbeddingVector:
    values: np.ndarray
    provider_id: str
    provider_version: str

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])


def token_hash(token: str) -> int:
    """Keyed 64-bit BLAKE2b of the UTF-8 token, as an unsigned integer."""
    digest = blake2b(token.encode("utf-8"), digest_size=8, key=_HASH_KEY).digest()
    return int.from_bytes(digest, "big")


def _embed_fallback(tokens, dim: int) -> np.ndarray:
    acc = np.zeros(dim, dtype=np.float64)
    for token in tokens:
        h = token_hash(token)
        sign = 1.0 if h < (1 << 63) else -1.0
        acc[h % dim] += sign
    acc /= len(tokens)
    return acc


def _embed_external(tokens, spec: EmbeddingProviderSpec) -> np.ndarray:
    params = spec.parameters
    if "endpoint_url" in params:
        import requests

        try:
            resp = requests.post(
                params["endpoint_url"], json={"tokens": list(tokens)}, timeout=30
            )
            resp.raise_for_status()
            payload = resp.json()
            vectors = np.asarray(payload["vectors"], dtype=np.float64)
        except Exception as exc:
            raise ProviderUnavailable(f"embedding endpoint failed: {exc}") from exc
        if vectors.ndim != 2 or vectors.shape[1] != spec.dim:
            raise ProviderUnavailable(
                f"endpoint returned shape {vectors.shape}, expected (n, {spec.dim})"
            )
        return vectors.mean(axis=0)

    if "model_path" in params:
        try:
            import torch  # noqa: F401
            from transformers import AutoModel, AutoTokenizer
        except ImportError as exc:
            raise ProviderUnavailable(f"transformers unavailable: {exc}") from exc
        try:
            tokenizer = AutoTokenizer.from_pretrained(params["model_path"])
            model = AutoModel.from_pretrained(params["model_path"])
        except Exception as exc:
            raise ProviderUnavailable(f"cannot load model: {exc}") from exc
        import torch

        with torch.no_grad():
            encoded = tokenizer(" ".join(tokens), return_tensors="pt", truncation=True)
            hidden = model(**encoded).last_hidden_state[0]
        pooled = hidden.mean(dim=0).numpy().astype(np.float64)
        if pooled.shape[0] != spec.dim:
            raise ProviderUnavailable(
                f"model emits dim {pooled.shape[0]}, spec says {spec.dim}"
            )
        return pooled

    raise ProviderUnavailable(
        "transformer-external requires 'endpoint_url' or 'model_path' in parameters"
    )


def embed_tokens(tokens, spec: EmbeddingProviderSpec) -> EmbeddingVector:
    """Embed a token sequence into a fixed-dimension vector.

    Deterministic for a fixed (tokens, spec). Raises EmptyInput for an
    empty token list and ProviderUnavailable when the external provider
    cannot be reached.
    """
    tokens = list(tokens)
    if not tokens:
        raise EmptyInput("cannot embed an empty token list")
    if spec.provider_id == FALLBACK_PROVIDER_ID:
        values = _embed_fallback(tokens, spec.dim)
        version = FALLBACK_PROVIDER_VERSION
    else:
        values = _embed_external(tokens, spec)
        version = str(spec.parameters.get("version", "external"))
    if not np.all(np.isfinite(values)):
        raise ProviderUnavailable("provider produced non-finite values")
    return EmbeddingVector(values=values, provider_id=spec.provider_id,
                           provider_version=version)


@dataclass(frozen=True)
class Standardizer:
    means: np.ndarray
    stds: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.means.shape[0])


def fit_standardizer(X) -> Standardizer:
    """Column means and population standard deviations of a feature matrix.

    Columns with std below 1e-12 store 1.0 so transform maps them to zero
    instead of blowing up.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got ndim={X.ndim}")
    if X.shape[0] < 2:
        raise TooFewRows(f"need at least 2 rows to standardize, got {X.shape[0]}")
    if not np.all(np.isfinite(X)):
        raise NonFiniteInput("feature matrix contains NaN or infinity")
    means = X.mean(axis=0)
    stds = X.std(axis=0)  # population (ddof=0)
    stds = np.where(stds < _ZERO_STD_FLOOR, 1.0, stds)
    return Standardizer(means=means, stds=stds)


def transform(X, s: Standardizer) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != s.dim:
        raise DimensionMismatch(
            f"matrix has {X.shape[-1] if X.ndim else 0} columns, standardizer dim is {s.dim}"
        )
    return (X - s.means) / s.stds


def transform_vector(v, s: Standardizer) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] != s.dim:
        raise DimensionMismatch(
            f"vector has length {v.shape[0] if v.ndim else 0}, standardizer dim is {s.dim}"
        )
    return (v - s.means) / s.stds
