"""Embedding providers for the `embed` stage.

The hash provider is a deterministic offline stand-in (feature hashing of
code subtokens); the service provider talks to the HTTP embedding service;
the import provider converts pre-computed vectors.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .corpus import Corpus, tokenize_identifiers
from .semantic import EmbeddingMatrix


class EmbedError(Exception):
    pass


def hash_embed_text(text: str, dim: int, max_tokens: int = 256) -> np.ndarray:
    tokens = tokenize_identifiers(text)[:max_tokens]
    vec = np.zeros(dim, dtype=np.float64)
    for token in tokens:
        digest = hashlib.sha256(token.encode("utf-8")).digest()
        idx = int.from_bytes(digest[:4], "little") % dim
        sign = 1.0 if digest[4] & 1 else -1.0
        vec[idx] += sign
    norm = np.linalg.norm(vec)
    if norm > 0:
        vec /= norm
    return vec.astype(np.float32)


def hash_embed_corpus(corpus: Corpus, dim: int = 64, max_tokens: int = 256) -> EmbeddingMatrix:
    data = np.stack([hash_embed_text(p.code, dim, max_tokens) for p in corpus])
    return EmbeddingMatrix(corpus.ids(), data)


def service_embed_corpus(
    corpus: Corpus,
    base_url: str,
    pooling: str = "first_last_avg",
    max_length: int = 256,
    batch_size: int = 32,
    timeout: float = 120.0,
) -> EmbeddingMatrix:
    import httpx

    rows = []
    pairs = corpus.pairs
    with httpx.Client(base_url=base_url, timeout=timeout) as client:
        for start in range(0, len(pairs), batch_size):
            batch = pairs[start : start + batch_size]
            response = client.post(
                "/embed",
                json={
                    "texts": [p.code for p in batch],
                    "pooling": pooling,
                    "max_length": max_length,
                },
            )
            if response.status_code != 200:
                raise EmbedError(f"embedding service error HTTP {response.status_code}")
            vectors = response.json()["vectors"]
            if len(vectors) != len(batch):
                raise EmbedError("embedding service returned wrong row count")
            rows.extend(vectors)
    return EmbeddingMatrix(corpus.ids(), np.asarray(rows, dtype=np.float32))


def import_vectors(path, corpus: Corpus | None = None) -> EmbeddingMatrix:
    """Read one {"id", "vector"} JSON object per line into an embedding matrix."""
    ids = []
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
                ids.append(obj["id"])
                rows.append(obj["vector"])
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise EmbedError(f"{path}:{lineno}: bad vector record ({exc})") from None
    if not rows:
        raise EmbedError(f"{path}: no vectors")
    matrix = EmbeddingMatrix(ids, np.asarray(rows, dtype=np.float32))
    if corpus is not None:
        missing = [p.id for p in corpus if p.id not in set(ids)]
        if missing:
            raise EmbedError(f"imported vectors missing corpus ids: {missing[:5]}")
    return matrix
