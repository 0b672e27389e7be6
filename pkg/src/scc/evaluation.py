"""BLEU/ROUGE metrics, significance testing, sampling, and human-study tooling."""

from __future__ import annotations

import json
import math
import random
import re
from collections import Counter
from dataclasses import dataclass
from statistics import NormalDist

_TOKEN_RE = re.compile(r"\w+|[^\w\s]")


class EvalError(Exception):
    pass


def metric_tokenize(text: str) -> list[str]:
    """Lowercase, whitespace-split, punctuation detached as separate tokens."""
    return _TOKEN_RE.findall(text.lower())


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


# --- BLEU ----------------------------------------------------------------


def bleu4(candidates: list[str], references: list[str]) -> float:
    """Corpus-level BLEU-4 percentage: clipped modified precision, uniform
    4-gram weights, brevity penalty, no smoothing."""
    if len(candidates) != len(references):
        raise EvalError(f"length mismatch: {len(candidates)} vs {len(references)}")
    if not candidates:
        raise EvalError("empty input")
    matches = [0] * 4
    totals = [0] * 4
    cand_len = 0
    ref_len = 0
    for cand, ref in zip(candidates, references):
        c = metric_tokenize(cand)
        r = metric_tokenize(ref)
        cand_len += len(c)
        ref_len += len(r)
        for n in range(1, 5):
            cand_counts = _ngrams(c, n)
            ref_counts = _ngrams(r, n)
            totals[n - 1] += sum(cand_counts.values())
            matches[n - 1] += sum(min(v, ref_counts[g]) for g, v in cand_counts.items())
    if any(t == 0 or m == 0 for m, t in zip(matches, totals)):
        return 0.0
    log_precision = sum(math.log(m / t) for m, t in zip(matches, totals)) / 4.0
    bp = 1.0 if cand_len > ref_len else math.exp(1.0 - ref_len / max(cand_len, 1))
    return 100.0 * bp * math.exp(log_precision)


def sentence_bleu4(candidate: str, reference: str) -> float:
    """Per-sentence BLEU-4 with add-one smoothing on zero higher-order counts."""
    c = metric_tokenize(candidate)
    r = metric_tokenize(reference)
    if not c or not r:
        return 0.0
    precisions = []
    for n in range(1, 5):
        cand_counts = _ngrams(c, n)
        ref_counts = _ngrams(r, n)
        total = sum(cand_counts.values())
        match = sum(min(v, ref_counts[g]) for g, v in cand_counts.items())
        if n == 1:
            if match == 0:
                return 0.0
            precisions.append(match / total)
        else:
            precisions.append((match + 1) / (total + 1))
    bp = 1.0 if len(c) > len(r) else math.exp(1.0 - len(r) / len(c))
    return 100.0 * bp * math.exp(sum(math.log(p) for p in precisions) / 4.0)


# --- ROUGE ---------------------------------------------------------------


def rouge_n(candidate: str, reference: str, n: int) -> float:
    """F1 percentage of clipped n-gram overlap for one pair."""
    if n not in (1, 2):
        raise EvalError(f"n must be 1 or 2, got {n}")
    c = _ngrams(metric_tokenize(candidate), n)
    r = _ngrams(metric_tokenize(reference), n)
    cand_total = sum(c.values())
    ref_total = sum(r.values())
    if cand_total == 0 or ref_total == 0:
        return 0.0
    overlap = sum(min(v, r[g]) for g, v in c.items())
    if overlap == 0:
        return 0.0
    precision = overlap / cand_total
    recall = overlap / ref_total
    return 100.0 * 2 * precision * recall / (precision + recall)


def _lcs_length(a: list[str], b: list[str]) -> int:
    if len(a) < len(b):
        a, b = b, a
    previous = [0] * (len(b) + 1)
    for tok_a in a:
        current = [0] * (len(b) + 1)
        for j, tok_b in enumerate(b, start=1):
            if tok_a == tok_b:
                current[j] = previous[j - 1] + 1
            else:
                current[j] = max(previous[j], current[j - 1])
        previous = current
    return previous[len(b)]


def rouge_l(candidate: str, reference: str) -> float:
    """F1 percentage from the longest common subsequence for one pair."""
    c = metric_tokenize(candidate)
    r = metric_tokenize(reference)
    if not c or not r:
        return 0.0
    lcs = _lcs_length(c, r)
    if lcs == 0:
        return 0.0
    precision = lcs / len(c)
    recall = lcs / len(r)
    return 100.0 * 2 * precision * recall / (precision + recall)


@dataclass
class MetricReport:
    bleu4: float
    rouge1: float
    rouge2: float
    rougeL: float
    per_sample: list[dict]  # aligned to the evaluated ids

    def to_dict(self) -> dict:
        return {
            "bleu4": self.bleu4,
            "rouge1": self.rouge1,
            "rouge2": self.rouge2,
            "rougeL": self.rougeL,
            "n": len(self.per_sample),
            "per_sample": self.per_sample,
        }


def metric_report(
    candidates: list[str], references: list[str], ids: list[str] | None = None
) -> MetricReport:
    """Corpus BLEU-4 plus mean per-pair ROUGE scores, with the per-sample
    breakdown needed for significance testing."""
    if len(candidates) != len(references):
        raise EvalError(f"length mismatch: {len(candidates)} vs {len(references)}")
    if not candidates:
        raise EvalError("empty input")
    if ids is None:
        ids = [str(i) for i in range(len(candidates))]
    per_sample = []
    for pid, cand, ref in zip(ids, candidates, references):
        per_sample.append(
            {
                "id": pid,
                "bleu4": sentence_bleu4(cand, ref),
                "rouge1": rouge_n(cand, ref, 1),
                "rouge2": rouge_n(cand, ref, 2),
                "rougeL": rouge_l(cand, ref),
            }
        )
    return MetricReport(
        bleu4=bleu4(candidates, references),
        rouge1=sum(s["rouge1"] for s in per_sample) / len(per_sample),
        rouge2=sum(s["rouge2"] for s in per_sample) / len(per_sample),
        rougeL=sum(s["rougeL"] for s in per_sample) / len(per_sample),
        per_sample=per_sample,
    )


# --- Wilcoxon signed-rank test -------------------------------------------


def _average_ranks(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for idx in order[i : j + 1]:
            ranks[idx] = avg
        i = j + 1
    return ranks


def wilcoxon_signed_rank(scores_a: list[float], scores_b: list[float]) -> float:
    """Two-sided p-value of the paired signed-rank test.

    Zero differences are dropped and tied ranks averaged.  For up to 25
    nonzero differences the exact null distribution is used; above that a
    normal approximation with tie and continuity corrections.
    """
    if len(scores_a) != len(scores_b):
        raise EvalError(f"length mismatch: {len(scores_a)} vs {len(scores_b)}")
    diffs = [a - b for a, b in zip(scores_a, scores_b) if a != b]
    m = len(diffs)
    if m == 0:
        raise EvalError("no nonzero differences")
    if m < 6:
        raise EvalError(f"too few nonzero differences ({m}, need >= 6)")
    ranks = _average_ranks([abs(d) for d in diffs])
    w_plus = sum(r for r, d in zip(ranks, diffs) if d > 0)

    if m <= 25:
        # exact: distribution of 2*W+ by convolution over doubled integer ranks
        doubled = [round(2 * r) for r in ranks]
        dist = {0: 1}
        for r2 in doubled:
            nxt: dict[int, int] = {}
            for s, count in dist.items():
                nxt[s] = nxt.get(s, 0) + count
                nxt[s + r2] = nxt.get(s + r2, 0) + count
            dist = nxt
        total = 2**m
        mean2 = sum(doubled) / 2
        observed = abs(2 * w_plus - mean2)
        extreme = sum(c for s, c in dist.items() if abs(s - mean2) >= observed - 1e-9)
        return extreme / total

    mean = m * (m + 1) / 4
    tie_sizes = Counter(ranks).values()
    variance = m * (m + 1) * (2 * m + 1) / 24 - sum(t**3 - t for t in tie_sizes) / 48
    if variance <= 0:
        raise EvalError("degenerate variance (all differences tied)")
    z = (abs(w_plus - mean) - 0.5) / math.sqrt(variance)
    return min(1.0, 2.0 * (1.0 - NormalDist().cdf(z)))


# --- sampling and human study --------------------------------------------


def sample_size(size: int, e: float = 0.05, z: float = 1.96) -> int:
    """Finite-population sample size at margin e and confidence score z."""
    if size < 1:
        raise EvalError(f"population size must be >= 1, got {size}")
    if not (0.0 < e < 1.0):
        raise EvalError(f"margin of error must be in (0, 1), got {e}")
    if z <= 0:
        raise EvalError(f"confidence score must be positive, got {z}")
    n0 = z * z * 0.25 / (e * e)
    minimum = n0 / (1.0 + (n0 - 1.0) / size)
    return math.floor(minimum + 0.5)


@dataclass(frozen=True)
class RatingRecord:
    item_id: str
    approach: str
    similarity: int
    naturalness: int
    informativeness: int

    def __post_init__(self):
        for name in ("similarity", "naturalness", "informativeness"):
            value = getattr(self, name)
            if not (1 <= value <= 5):
                raise EvalError(f"{name} score {value} out of range 1..5")


def export_questionnaire(
    items: list[dict],
    outputs: dict[str, dict[str, str]],
    sample_count: int,
    seed: int = 0,
) -> tuple[list[dict], dict]:
    """Build blinded review forms plus the sealed label map.

    items: [{id, code, comment}] for the test pool; outputs maps approach
    name → {item id → generated comment}.  Samples uniformly with the seed
    and shuffles approach order independently per item.
    """
    rng = random.Random(seed)
    approaches = sorted(outputs)
    if not approaches:
        raise EvalError("no approaches to export")
    pool = sorted(items, key=lambda it: it["id"])
    if sample_count > len(pool):
        raise EvalError(f"cannot sample {sample_count} from {len(pool)} items")
    sampled = rng.sample(pool, sample_count)
    for item in sampled:
        for approach in approaches:
            if item["id"] not in outputs[approach]:
                raise EvalError(f"approach {approach!r} has no output for id {item['id']!r}")
    forms = []
    label_map: dict[str, dict[str, str]] = {}
    for item in sampled:
        order = approaches[:]
        rng.shuffle(order)
        slots = {f"comment_{chr(ord('A') + i)}": a for i, a in enumerate(order)}
        forms.append(
            {
                "item_id": item["id"],
                "code": item["code"],
                "ground_truth": item["comment"],
                "comments": {
                    slot: outputs[approach][item["id"]] for slot, approach in slots.items()
                },
                "scale": "1=poor 2=marginal 3=acceptable 4=good 5=excellent",
                "perspectives": ["similarity", "naturalness", "informativeness"],
            }
        )
        label_map[item["id"]] = slots
    return forms, label_map


def aggregate_ratings(records: list[RatingRecord]) -> dict[str, dict[str, float]]:
    """Mean score per approach for each of the three rating perspectives."""
    if not records:
        raise EvalError("no rating records")
    sums: dict[str, list[float]] = {}
    counts: dict[str, int] = {}
    for rec in records:
        acc = sums.setdefault(rec.approach, [0.0, 0.0, 0.0])
        acc[0] += rec.similarity
        acc[1] += rec.naturalness
        acc[2] += rec.informativeness
        counts[rec.approach] = counts.get(rec.approach, 0) + 1
    return {
        approach: {
            "similarity": acc[0] / counts[approach],
            "naturalness": acc[1] / counts[approach],
            "informativeness": acc[2] / counts[approach],
        }
        for approach, acc in sums.items()
    }


def save_report(report: MetricReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report.to_dict(), fh, ensure_ascii=False, indent=2)
