"""Freeze reference metric values for tests/fixtures/metric_fixture.json.

The scores here are computed by deliberately naive, self-contained
implementations (fraction arithmetic, recursive LCS) that share no code
with the package, so the frozen numbers act as an independent oracle.
"""

from __future__ import annotations

import json
import math
import pathlib
from fractions import Fraction
from functools import lru_cache

PAIRS = [
    ("returns the token balance of the owner", "returns the token balance of the owner"),
    ("transfer tokens to the given address", "transfer tokens to a given address"),
    ("approve the spender to withdraw tokens", "approves a spender to withdraw the tokens"),
    ("mint new tokens for the account", "creates new tokens and assigns them to the account"),
    ("burn tokens from the given account", "destroys tokens held by the account"),
    ("the cat sat on the mat", "the cat is on the mat"),
    ("pause the contract operations until resumed", "pauses all operations of the contract"),
    ("withdraw the requested amount from the deposit", "withdraw an amount from the deposit balance"),
    ("sum all values in the array", "returns the sum of all array values"),
    ("restricts the call to the owner address only", "only the owner address may call this"),
    ("update the stored admin address after validation", "sets a new admin address"),
    ("a completely different sentence here", "nothing shared with candidate text"),
    ("check whether the sale period is still open", "returns true while the sale period is open"),
    ("set the maximum cap for contributions", "updates the contribution cap value"),
    ("emit an event when ownership changes", "fires the ownership transferred event"),
    ("returns true if the address is whitelisted", "checks whether an address is on the whitelist"),
    ("lock the vault until the release time", "locks funds until the configured release time"),
    ("compute the fee for the given amount", "calculates the transaction fee of an amount"),
    ("refund the sender when the goal is missed", "refunds contributors if the funding goal fails"),
    ("delegate voting power to another account", "delegates the caller's votes to another address"),
    ("increase the allowance of the spender, safely", "safely increases the spender's allowance"),
    ("this comment, with punctuation: yes!", "this comment, with punctuation: yes!"),
    ("short words only", "short words only here"),
    ("the quick brown fox jumps over the lazy dog", "a quick brown dog jumps over a lazy fox"),
]


def tokenize(text: str) -> list[str]:
    out, word = [], ""
    for ch in text.lower():
        if ch.isalnum() or ch == "_":
            word += ch
        else:
            if word:
                out.append(word)
                word = ""
            if not ch.isspace():
                out.append(ch)
    if word:
        out.append(word)
    return out


def ngram_counts(tokens, n):
    counts = {}
    for i in range(len(tokens) - n + 1):
        g = tuple(tokens[i : i + n])
        counts[g] = counts.get(g, 0) + 1
    return counts


def corpus_bleu4(pairs) -> float:
    match = {n: 0 for n in range(1, 5)}
    total = {n: 0 for n in range(1, 5)}
    c_len = r_len = 0
    for cand, ref in pairs:
        c, r = tokenize(cand), tokenize(ref)
        c_len += len(c)
        r_len += len(r)
        for n in range(1, 5):
            cc, rc = ngram_counts(c, n), ngram_counts(r, n)
            total[n] += sum(cc.values())
            match[n] += sum(min(v, rc.get(g, 0)) for g, v in cc.items())
    if any(total[n] == 0 or match[n] == 0 for n in range(1, 5)):
        return 0.0
    geo = 1.0
    for n in range(1, 5):
        geo *= float(Fraction(match[n], total[n])) ** 0.25
    bp = 1.0 if c_len > r_len else math.exp(1 - r_len / c_len)
    return 100.0 * bp * geo


def f1(p: Fraction, r: Fraction) -> float:
    if p + r == 0:
        return 0.0
    return float(100 * 2 * p * r / (p + r))


def rouge_n(cand: str, ref: str, n: int) -> float:
    cc = ngram_counts(tokenize(cand), n)
    rc = ngram_counts(tokenize(ref), n)
    tc, tr = sum(cc.values()), sum(rc.values())
    if tc == 0 or tr == 0:
        return 0.0
    overlap = sum(min(v, rc.get(g, 0)) for g, v in cc.items())
    return f1(Fraction(overlap, tc), Fraction(overlap, tr))


def rouge_l(cand: str, ref: str) -> float:
    a, b = tuple(tokenize(cand)), tuple(tokenize(ref))
    if not a or not b:
        return 0.0

    @lru_cache(maxsize=None)
    def lcs(i: int, j: int) -> int:
        if i == 0 or j == 0:
            return 0
        if a[i - 1] == b[j - 1]:
            return lcs(i - 1, j - 1) + 1
        return max(lcs(i - 1, j), lcs(i, j - 1))

    length = lcs(len(a), len(b))
    return f1(Fraction(length, len(a)), Fraction(length, len(b)))


def main() -> None:
    per_pair = []
    for cand, ref in PAIRS:
        per_pair.append(
            {
                "candidate": cand,
                "reference": ref,
                "rouge1": rouge_n(cand, ref, 1),
                "rouge2": rouge_n(cand, ref, 2),
                "rougeL": rouge_l(cand, ref),
            }
        )
    fixture = {
        "corpus_bleu4": corpus_bleu4(PAIRS),
        "mean_rouge1": sum(p["rouge1"] for p in per_pair) / len(per_pair),
        "mean_rouge2": sum(p["rouge2"] for p in per_pair) / len(per_pair),
        "mean_rougeL": sum(p["rougeL"] for p in per_pair) / len(per_pair),
        "pairs": per_pair,
    }
    out = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "metric_fixture.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(fixture, fh, indent=2)
    print(f"wrote {len(per_pair)} pairs to {out}")
    print("corpus BLEU-4:", fixture["corpus_bleu4"])


if __name__ == "__main__":
    main()
