"""Encoders producing 768-dim single-precision code embeddings.

Two implementations share one interface: a transformer wrapper for a locally
available pre-trained checkpoint, and a hashing encoder that needs no model
download and is fully deterministic — the default in offline environments.
"""

from __future__ import annotations

import hashlib
import re

import numpy as np

DIM = 768
POOLINGS = ("cls", "mean", "first_last_avg")

_IDENT_RE = re.compile(r"[A-Za-z0-9]+|[^\sA-Za-z0-9]")
_SUBTOKEN_RE = re.compile(r"[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z]+|[A-Z]+|[0-9]+")


class EncoderError(Exception):
    pass


def tokenize(text: str) -> list[str]:
    """CamelCase-aware subtoken split of a code snippet, lowercased."""
    tokens = []
    for chunk in _IDENT_RE.findall(text):
        if chunk[0].isalnum():
            tokens.extend(s.lower() for s in _SUBTOKEN_RE.findall(chunk))
        else:
            tokens.append(chunk)
    return tokens


def _seed_vector(salt: str, token: str) -> np.ndarray:
    digest = hashlib.sha256(f"{salt}\x00{token}".encode("utf-8")).digest()
    rng = np.random.default_rng(int.from_bytes(digest[:8], "little"))
    return rng.standard_normal(DIM).astype(np.float32)


class HashEncoder:
    """Deterministic pseudo-embeddings from salted token hashes.

    Each token gets a fixed random direction per "layer" salt, with a small
    positional component so reorderings produce different vectors.  The two
    salts stand in for first- and last-layer hidden states, which keeps the
    three pooling modes genuinely distinct.
    """

    name = "hash-768"

    def __init__(self):
        self._cache: dict[tuple[str, str], np.ndarray] = {}

    def _token_vector(self, salt: str, token: str) -> np.ndarray:
        key = (salt, token)
        if key not in self._cache:
            self._cache[key] = _seed_vector(salt, token)
        return self._cache[key]

    def _layer(self, salt: str, tokens: list[str]) -> np.ndarray:
        rows = np.stack(
            [
                self._token_vector(salt, tok) + 0.1 * self._token_vector(salt, f"@pos{i}")
                for i, tok in enumerate(tokens)
            ]
        )
        return rows

    def encode(self, texts: list[str], pooling: str, max_length: int) -> np.ndarray:
        if pooling not in POOLINGS:
            raise EncoderError(f"unknown pooling {pooling!r}")
        out = np.zeros((len(texts), DIM), dtype=np.float32)
        for row, text in enumerate(texts):
            tokens = tokenize(text)[:max_length]
            if not tokens:
                continue
            if pooling == "cls":
                vec = self._token_vector("cls", " ".join(tokens))
            elif pooling == "mean":
                vec = self._layer("last", tokens).mean(axis=0)
            else:
                first = self._layer("first", tokens)
                last = self._layer("last", tokens)
                vec = ((first + last) / 2.0).mean(axis=0)
            norm = float(np.linalg.norm(vec))
            out[row] = vec / norm if norm > 0 else vec
        return out


class TransformerEncoder:
    """Wrap a local pre-trained encoder checkpoint (e.g. a CodeBERT directory)."""

    def __init__(self, model_path: str):
        try:
            import torch
            from transformers import AutoModel, AutoTokenizer
        except ImportError as exc:  # pragma: no cover - optional dependency
            raise EncoderError(f"transformer backend unavailable: {exc}") from exc
        self._torch = torch
        self.tokenizer = AutoTokenizer.from_pretrained(model_path)
        self.model = AutoModel.from_pretrained(model_path, output_hidden_states=True)
        self.model.eval()
        self.name = model_path

    def encode(self, texts: list[str], pooling: str, max_length: int) -> np.ndarray:
        if pooling not in POOLINGS:
            raise EncoderError(f"unknown pooling {pooling!r}")
        torch = self._torch
        batch = self.tokenizer(
            [" ".join(tokenize(t)) for t in texts],
            padding=True,
            truncation=True,
            max_length=max_length,
            return_tensors="pt",
        )
        with torch.no_grad():
            output = self.model(**batch)
        mask = batch["attention_mask"].unsqueeze(-1).float()
        if pooling == "cls":
            vectors = output.last_hidden_state[:, 0]
        elif pooling == "mean":
            summed = (output.last_hidden_state * mask).sum(dim=1)
            vectors = summed / mask.sum(dim=1)
        else:
            hidden = (output.hidden_states[0] + output.hidden_states[-1]) / 2.0
            vectors = (hidden * mask).sum(dim=1) / mask.sum(dim=1)
        return vectors.cpu().numpy().astype(np.float32)


def make_encoder(model_path: str | None):
    """Local checkpoint if given, deterministic hash encoder otherwise."""
    if model_path:
        return TransformerEncoder(model_path)
    return HashEncoder()
