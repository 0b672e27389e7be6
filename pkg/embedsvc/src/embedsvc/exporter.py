"""Batch export: corpus JSON lines -> SCEB embedding file, in corpus order."""

from __future__ import annotations

import json

import numpy as np

from .sceb import ScebError, write_sceb


class ExportError(Exception):
    pass


def read_corpus(path) -> list[tuple[str, str]]:
    """Return (id, code) pairs in file order from a one-JSON-per-line corpus."""
    records = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ExportError(f"line {lineno}: invalid JSON: {exc}") from exc
            try:
                pid, code = obj["id"], obj["code"]
            except (KeyError, TypeError) as exc:
                raise ExportError(f"line {lineno}: missing id/code field") from exc
            if pid in seen:
                raise ExportError(f"line {lineno}: duplicate id {pid!r}")
            seen.add(pid)
            records.append((pid, code))
    if not records:
        raise ExportError(f"{path}: corpus is empty")
    return records


def export_corpus(encoder, corpus_path, output_path, pooling: str, max_length: int,
                  batch_size: int = 32) -> int:
    """Encode every pair and write one SCEB file; returns the row count."""
    records = read_corpus(corpus_path)
    ids = [pid for pid, _ in records]
    rows = []
    for start in range(0, len(records), batch_size):
        chunk = records[start : start + batch_size]
        try:
            rows.append(encoder.encode([code for _, code in chunk], pooling, max_length))
        except Exception as exc:
            failed = ", ".join(pid for pid, _ in chunk)
            raise ExportError(f"encoding failed for ids [{failed}]: {exc}") from exc
    try:
        write_sceb(ids, np.vstack(rows), output_path)
    except ScebError as exc:
        raise ExportError(str(exc)) from exc
    return len(ids)
