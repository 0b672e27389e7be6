"""Corpus ingestion, cleaning, splitting, and tokenization for ⟨method, comment⟩ pairs."""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator

SPLITS = ("train", "validation", "test")

_WORD_RE = re.compile(r"[A-Za-z0-9]+")
_SUBTOKEN_RE = re.compile(r"[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z]+|[A-Z]+|[0-9]+")


class CorpusError(Exception):
    pass


@dataclass(frozen=True)
class CodeCommentPair:
    id: str
    code: str
    comment: str
    split: str | None = None


@dataclass(frozen=True)
class IngestIssue:
    line: int
    message: str


@dataclass(frozen=True)
class Removal:
    id: str
    rule: str  # "dup_comment" | "template" | "short"


@dataclass
class Corpus:
    """Ordered, id-unique collection of code/comment pairs.

    Immutable by convention once built; all transforms return new corpora.
    """

    pairs: list[CodeCommentPair] = field(default_factory=list)

    def __post_init__(self):
        ids = [p.id for p in self.pairs]
        if len(ids) != len(set(ids)):
            raise CorpusError("duplicate ids in corpus")
        self._by_id = {p.id: p for p in self.pairs}

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[CodeCommentPair]:
        return iter(self.pairs)

    def __getitem__(self, pair_id: str) -> CodeCommentPair:
        return self._by_id[pair_id]

    def __contains__(self, pair_id: str) -> bool:
        return pair_id in self._by_id

    def ids(self) -> list[str]:
        return [p.id for p in self.pairs]

    def subset(self, split: str) -> "Corpus":
        return Corpus([p for p in self.pairs if p.split == split])


@dataclass
class CorpusStats:
    counts: dict[str, int]
    avg_code_tokens: dict[str, float]
    avg_comment_tokens: dict[str, float]


def ingest(lines: Iterable[str]) -> tuple[Corpus, list[IngestIssue]]:
    """Parse one-JSON-object-per-line records into a corpus.

    Malformed lines and duplicate ids are collected as issues with their
    line numbers, never silently dropped.
    """
    pairs: list[CodeCommentPair] = []
    issues: list[IngestIssue] = []
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as exc:
            issues.append(IngestIssue(lineno, f"invalid JSON: {exc.msg}"))
            continue
        if not isinstance(obj, dict):
            issues.append(IngestIssue(lineno, "record is not a JSON object"))
            continue
        missing = [k for k in ("id", "code", "comment") if not isinstance(obj.get(k), str)]
        if missing:
            issues.append(IngestIssue(lineno, f"missing or non-string fields: {', '.join(missing)}"))
            continue
        split = obj.get("split")
        if split is not None and split not in SPLITS:
            issues.append(IngestIssue(lineno, f"unknown split {split!r}"))
            continue
        pid = obj["id"]
        if pid in seen:
            issues.append(
                IngestIssue(lineno, f"duplicate id {pid!r} (first seen on line {seen[pid]})")
            )
            continue
        seen[pid] = lineno
        pairs.append(CodeCommentPair(pid, obj["code"], obj["comment"], split))
    return Corpus(pairs), issues


def load_corpus(path) -> Corpus:
    with open(path, encoding="utf-8") as fh:
        corpus, issues = ingest(fh)
    if issues:
        detail = "; ".join(f"line {i.line}: {i.message}" for i in issues[:5])
        raise CorpusError(f"{len(issues)} bad records in {path} ({detail})")
    return corpus


def save_corpus(corpus: Corpus, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for p in corpus:
            obj = {"id": p.id, "code": p.code, "comment": p.comment}
            if p.split is not None:
                obj["split"] = p.split
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def _normalize_code(code: str) -> str:
    return "".join(code.split())


def clean(
    corpus: Corpus,
    dup_code_threshold: int = 2,
    template_freq_threshold: int = 20,
    min_comment_words: int = 4,
    word_filter_on: str = "comment",
) -> tuple[Corpus, list[Removal]]:
    """Drop low-quality pairs; returns the surviving corpus and a removal report.

    Rule "dup_comment": the exact comment string is shared by at least
    ``dup_code_threshold`` distinct (whitespace-normalized) code bodies.
    Rule "template": the comment occurs at least ``template_freq_threshold``
    times corpus-wide.  Rule "short": fewer than ``min_comment_words``
    whitespace-separated words in the filtered field.
    """
    if dup_code_threshold < 2 or template_freq_threshold < 2:
        raise CorpusError("thresholds must be >= 2")
    if word_filter_on not in ("comment", "code"):
        raise CorpusError("word_filter_on must be 'comment' or 'code'")

    codes_per_comment: dict[str, set[str]] = {}
    freq: dict[str, int] = {}
    for p in corpus:
        codes_per_comment.setdefault(p.comment, set()).add(_normalize_code(p.code))
        freq[p.comment] = freq.get(p.comment, 0) + 1

    kept: list[CodeCommentPair] = []
    removals: list[Removal] = []
    for p in corpus:
        if len(codes_per_comment[p.comment]) >= dup_code_threshold:
            removals.append(Removal(p.id, "dup_comment"))
        elif freq[p.comment] >= template_freq_threshold:
            removals.append(Removal(p.id, "template"))
        elif len(getattr(p, word_filter_on).split()) < min_comment_words:
            removals.append(Removal(p.id, "short"))
        else:
            kept.append(p)
    return Corpus(kept), removals


def split(
    corpus: Corpus,
    ratios: tuple[float, float, float] = (0.8, 0.1, 0.1),
    seed: int = 0,
) -> Corpus:
    """Assign train/validation/test tags; floor-based sizes, remainder to train."""
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise CorpusError(f"ratios must sum to 1, got {sum(ratios)}")
    n = len(corpus)
    if n < 3:
        raise CorpusError(f"corpus too small to split ({n} pairs, need >= 3)")
    sizes = [int(n * r) for r in ratios]
    sizes[0] += n - sum(sizes)

    order = list(range(n))
    random.Random(seed).shuffle(order)
    assignment = {}
    cursor = 0
    for name, size in zip(SPLITS, sizes):
        for idx in order[cursor : cursor + size]:
            assignment[idx] = name
        cursor += size
    return Corpus(
        [
            CodeCommentPair(p.id, p.code, p.comment, assignment[i])
            for i, p in enumerate(corpus.pairs)
        ]
    )


def tokenize_identifiers(code: str) -> list[str]:
    """Split code into lowercase subtokens.

    Splits on non-alphanumeric separators and underscores, then on
    camel-hump and letter/digit boundaries; pure punctuation is dropped.
    """
    tokens = []
    for word in _WORD_RE.findall(code):
        tokens.extend(m.group(0).lower() for m in _SUBTOKEN_RE.finditer(word))
    return tokens


def stats(corpus: Corpus) -> CorpusStats:
    """Per-split counts and mean whitespace-token lengths; empty splits report 0."""
    counts = {name: 0 for name in SPLITS}
    code_tok = {name: 0 for name in SPLITS}
    comment_tok = {name: 0 for name in SPLITS}
    for p in corpus:
        if p.split is None:
            raise CorpusError(f"pair {p.id!r} has no split tag")
        counts[p.split] += 1
        code_tok[p.split] += len(p.code.split())
        comment_tok[p.split] += len(p.comment.split())
    avg_code = {s: (code_tok[s] / counts[s] if counts[s] else 0.0) for s in SPLITS}
    avg_comment = {s: (comment_tok[s] / counts[s] if counts[s] else 0.0) for s in SPLITS}
    return CorpusStats(counts, avg_code, avg_comment)
