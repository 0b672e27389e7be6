"""Writer for the SCEB embedding container.

Layout: magic "SCEB", then little-endian u32 version (1), row count N, and
dimension D; an id table of N (u32 length, utf-8 bytes) entries; and N*D
float32 values row-major.
"""

from __future__ import annotations

import os
import struct
import tempfile

import numpy as np

MAGIC = b"SCEB"
VERSION = 1


class ScebError(Exception):
    pass


def write_sceb(ids: list[str], vectors: np.ndarray, path) -> None:
    """Atomically write an SCEB file; no partial output survives a failure."""
    vectors = np.asarray(vectors, dtype="<f4")
    if vectors.ndim != 2 or vectors.shape[0] != len(ids):
        raise ScebError(f"{len(ids)} ids but vector shape {vectors.shape}")
    if not np.all(np.isfinite(vectors)):
        raise ScebError("vectors contain NaN or Inf")
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack("<III", VERSION, len(ids), vectors.shape[1]))
            for pid in ids:
                raw = pid.encode("utf-8")
                fh.write(struct.pack("<I", len(raw)))
                fh.write(raw)
            fh.write(np.ascontiguousarray(vectors).tobytes())
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
