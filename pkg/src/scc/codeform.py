"""Structural and lexical views of contract code plus their similarity scores."""

from __future__ import annotations

from dataclasses import dataclass

from . import solparse
from .corpus import tokenize_identifiers

_PUNCT_CLASS = {
    "{": "lbrace", "}": "rbrace", "(": "lparen", ")": "rparen",
    "[": "lbracket", "]": "rbracket", ";": "semi", ",": "comma", ".": "dot",
}


@dataclass(frozen=True)
class SbtSequence:
    """Linearized structural view of one code snippet.

    ``degraded`` marks snippets that did not parse and fell back to the
    keyword/punctuation-class token stream.
    """

    tokens: tuple[str, ...]
    degraded: bool = False

    def __len__(self) -> int:
        return len(self.tokens)


def _linearize(node, out: list[str]) -> None:
    if isinstance(node, str):
        out.append(node)
        return
    out.append(node[0])
    for child in node[1:]:
        _linearize(child, out)


def _degraded_tokens(code: str) -> list[str]:
    out = []
    try:
        tokens = solparse.lex(code)
    except solparse.ParseError:
        # lexing itself failed; fall back to a coarse character-class stream
        for ch in code:
            if ch in _PUNCT_CLASS:
                out.append(_PUNCT_CLASS[ch])
        return out
    for t in tokens:
        if t.kind == "keyword":
            out.append(t.text)
        elif t.kind == "ident":
            out.append("ident")
        elif t.kind == "number":
            out.append("num")
        elif t.kind == "string":
            out.append("str")
        else:
            out.append(_PUNCT_CLASS.get(t.text, "op"))
    return out


def to_sbt(code: str) -> SbtSequence:
    """Linearize code into a structure-based token sequence.

    Parseable input is linearized by pre-order AST traversal with
    identifier/literal leaves emitted as text; unparseable input uses the
    degraded lexical fallback and is flagged.
    """
    if not code.strip():
        return SbtSequence((), degraded=False)
    try:
        tree = solparse.parse(code)
    except solparse.ParseError:
        return SbtSequence(tuple(_degraded_tokens(code)), degraded=True)
    out: list[str] = []
    _linearize(tree, out)
    return SbtSequence(tuple(out))


def levenshtein(a, b) -> int:
    """Token-level edit distance (insert/delete/substitute), two-row DP."""
    a = list(a)
    b = list(b)
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, tok_a in enumerate(a, start=1):
        current = [i] + [0] * len(b)
        for j, tok_b in enumerate(b, start=1):
            cost = 0 if tok_a == tok_b else 1
            current[j] = min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + cost)
        previous = current
    return previous[len(b)]


def syntactic_similarity(a_code: str, b_code: str) -> float:
    """Normalized edit similarity of the two structural sequences.

    (len(A)+len(B) − lev) / (len(A)+len(B)); both sequences empty → 1,
    exactly one empty → 0.
    """
    a = to_sbt(a_code).tokens
    b = to_sbt(b_code).tokens
    return sequence_similarity(a, b)


def sequence_similarity(a, b) -> float:
    a = list(a)
    b = list(b)
    total = len(a) + len(b)
    if total == 0:
        return 1.0
    if not a or not b:
        return 0.0
    return (total - levenshtein(a, b)) / total


def lexical_set(code: str) -> frozenset[str]:
    """Deduplicated subtoken set of the code."""
    return frozenset(tokenize_identifiers(code))


def jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    if not a and not b:
        return 1.0
    union = len(a | b)
    return len(a & b) / union


def lexical_similarity(a_code: str, b_code: str) -> float:
    """Jaccard similarity of the two subtoken sets; both empty → 1."""
    return jaccard(lexical_set(a_code), lexical_set(b_code))


def mixed_score(a_code: str, b_code: str, lam: float = 0.7) -> float:
    """λ-weighted fusion of lexical and syntactic similarity."""
    if not (0.0 <= lam <= 1.0):
        raise ValueError(f"lambda must be in [0, 1], got {lam}")
    return lam * lexical_similarity(a_code, b_code) + (1.0 - lam) * syntactic_similarity(
        a_code, b_code
    )
