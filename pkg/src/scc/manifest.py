"""Run manifests: enough provenance to reproduce any pipeline stage."""

from __future__ import annotations

import hashlib
import json
import sys
import time

from . import __version__


def file_digest(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def write_manifest(output_path, stage: str, inputs: list, params: dict) -> str:
    """Write `<output>.manifest.json` beside the stage output and return its path."""
    manifest = {
        "stage": stage,
        "tool_version": __version__,
        "argv": sys.argv,
        "params": params,
        "inputs": {str(p): file_digest(p) for p in inputs},
        "output": {str(output_path): file_digest(output_path)},
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    path = f"{output_path}.manifest.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
    return path
