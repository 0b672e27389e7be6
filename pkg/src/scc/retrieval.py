"""Two-stage demonstration selection and its ablation variants."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

import numpy as np

from . import codeform, semantic
from .corpus import Corpus

STRATEGIES = ("full", "random", "no_whitening", "semantic_only")


class RetrievalError(Exception):
    pass


@dataclass(frozen=True)
class RetrievalConfig:
    n: int = 10
    k: int = 5
    lam: float = 0.7
    strategy: str = "full"
    seed: int = 0

    def __post_init__(self):
        if not (1 <= self.k <= self.n):
            raise RetrievalError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if not (0.0 <= self.lam <= 1.0):
            raise RetrievalError(f"lambda must be in [0, 1], got {self.lam}")
        if self.strategy not in STRATEGIES:
            raise RetrievalError(f"unknown strategy {self.strategy!r}")


@dataclass(frozen=True)
class Demonstration:
    id: str
    code: str
    comment: str
    semantic_distance: float
    mixed_score: float


@dataclass
class DemonstrationSet:
    query_id: str
    entries: list[Demonstration]
    short_result: bool = False


@dataclass
class RetrievalIndex:
    """Immutable shared state for retrieving against one training corpus."""

    corpus: Corpus
    embeddings: semantic.EmbeddingMatrix
    whitening: semantic.WhiteningModel | None
    whitened: np.ndarray | None = field(default=None)

    def __post_init__(self):
        missing = [p.id for p in self.corpus if p.id not in set(self.embeddings.ids)]
        if missing:
            raise RetrievalError(f"embeddings missing for train ids: {missing[:5]}")
        order = {pid: i for i, pid in enumerate(self.embeddings.ids)}
        self._rows = np.stack([self.embeddings.data[order[p.id]] for p in self.corpus])
        self._ids = [p.id for p in self.corpus]
        if self.whitening is not None:
            self.whitened = semantic.apply_whitening(self.whitening, self._rows)

    def stage1_rows(self, use_whitening: bool) -> np.ndarray:
        if use_whitening:
            if self.whitened is None:
                raise RetrievalError("no whitening model fitted for this index")
            return self.whitened
        return self._rows.astype(np.float64)

    @property
    def ids(self) -> list[str]:
        return self._ids


def _stage1(
    index: RetrievalIndex, query_vec: np.ndarray, query_id: str, n: int, use_whitening: bool
) -> list[tuple[str, float]]:
    rows = index.stage1_rows(use_whitening)
    if use_whitening:
        query_vec = semantic.apply_whitening(index.whitening, query_vec)
    ids = index.ids
    keep = [i for i, pid in enumerate(ids) if pid != query_id]
    if not keep:
        raise RetrievalError("train corpus has no candidates besides the query")
    return semantic.top_n(query_vec, [ids[i] for i in keep], rows[keep], n)


def _rerank(
    index: RetrievalIndex,
    query_code: str,
    candidates: list[tuple[str, float]],
    k: int,
    lam: float,
) -> list[Demonstration]:
    query_lex = codeform.lexical_set(query_code)
    query_sbt = codeform.to_sbt(query_code).tokens
    scored = []
    for pid, dist in candidates:
        pair = index.corpus[pid]
        lex = codeform.jaccard(query_lex, codeform.lexical_set(pair.code))
        syn = codeform.sequence_similarity(query_sbt, codeform.to_sbt(pair.code).tokens)
        score = lam * lex + (1.0 - lam) * syn
        scored.append(Demonstration(pid, pair.code, pair.comment, dist, score))
    scored.sort(key=lambda d: (-d.mixed_score, d.id))
    return scored[:k]


def retrieve(
    query_id: str,
    query_code: str,
    query_embedding: np.ndarray,
    index: RetrievalIndex,
    config: RetrievalConfig = RetrievalConfig(),
) -> DemonstrationSet:
    """Select top-k demonstrations for one query.

    full: stage 1 ranks train rows by squared L2 distance in whitened
    space, stage 2 reranks the top-n by the fused lexical/syntactic score.
    Ablations: random (seeded sample), no_whitening (raw-embedding stage 1),
    semantic_only (stage-1 top-k, no rerank).  Ties break ascending by id.
    """
    if len(index.corpus) == 0:
        raise RetrievalError("empty train corpus")

    if config.strategy == "random":
        # per-query stream so distinct queries do not share one sample
        rng = random.Random(f"{config.seed}:{query_id}")
        pool = [p.id for p in index.corpus if p.id != query_id]
        chosen = rng.sample(pool, min(config.k, len(pool)))
        entries = []
        for pid in chosen:
            pair = index.corpus[pid]
            entries.append(Demonstration(pid, pair.code, pair.comment, float("nan"), float("nan")))
        return DemonstrationSet(query_id, entries, short_result=len(entries) < config.k)

    use_whitening = config.strategy != "no_whitening"
    candidates = _stage1(index, query_embedding, query_id, config.n, use_whitening)

    if config.strategy == "semantic_only":
        entries = []
        for pid, dist in candidates[: config.k]:
            pair = index.corpus[pid]
            entries.append(Demonstration(pid, pair.code, pair.comment, dist, float("nan")))
        return DemonstrationSet(query_id, entries, short_result=len(entries) < config.k)

    entries = _rerank(index, query_code, candidates, config.k, config.lam)
    return DemonstrationSet(query_id, entries, short_result=len(entries) < config.k)


def reuse_top1(
    query_id: str,
    query_code: str,
    query_embedding: np.ndarray,
    index: RetrievalIndex,
    config: RetrievalConfig = RetrievalConfig(),
) -> str:
    """Retrieval-only baseline: reuse the comment of the best-scored candidate."""
    demos = retrieve(query_id, query_code, query_embedding, index, config)
    if not demos.entries:
        raise RetrievalError("no candidates to reuse")
    return demos.entries[0].comment


def export_demonstrations(results: list[DemonstrationSet], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for res in results:
            obj = {
                "query_id": res.query_id,
                "short_result": res.short_result,
                "entries": [
                    {
                        "id": e.id,
                        "semantic_distance": None
                        if math.isnan(e.semantic_distance)
                        else e.semantic_distance,
                        "mixed_score": None if math.isnan(e.mixed_score) else e.mixed_score,
                    }
                    for e in res.entries
                ],
            }
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
