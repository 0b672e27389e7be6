"""Embedding storage, whitening transform, and stage-1 semantic retrieval."""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

SCEB_MAGIC = b"SCEB"
SCWH_MAGIC = b"SCWH"
EIGENVALUE_FLOOR = 1e-10


class FormatError(Exception):
    pass


class WhiteningError(Exception):
    pass


@dataclass
class EmbeddingMatrix:
    """N embeddings of width D with aligned row ids; float32, immutable."""

    ids: list[str]
    data: np.ndarray  # (N, D) float32

    def __post_init__(self):
        self.data = np.ascontiguousarray(self.data, dtype=np.float32)
        if self.data.ndim != 2:
            raise FormatError("embedding data must be 2-dimensional")
        if len(self.ids) != self.data.shape[0]:
            raise FormatError("id count does not match row count")
        if len(set(self.ids)) != len(self.ids):
            raise FormatError("embedding ids must be unique")
        if not np.all(np.isfinite(self.data)):
            raise FormatError("embedding data contains NaN or Inf")

    @property
    def count(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]

    def row(self, pair_id: str) -> np.ndarray:
        try:
            return self.data[self.ids.index(pair_id)]
        except ValueError:
            raise KeyError(pair_id) from None


@dataclass
class WhiteningModel:
    """Centering vector and decorrelating projection reducing dimension D→d."""

    mean: np.ndarray  # (D,) float64
    projection: np.ndarray  # (D, d) float64
    source_count: int

    def __post_init__(self):
        self.mean = np.asarray(self.mean, dtype=np.float64)
        self.projection = np.asarray(self.projection, dtype=np.float64)
        if self.mean.ndim != 1 or self.projection.ndim != 2:
            raise WhiteningError("bad model shapes")
        if self.projection.shape[0] != self.mean.shape[0]:
            raise WhiteningError("mean / projection dimension mismatch")
        if not (1 <= self.projection.shape[1] <= self.projection.shape[0]):
            raise WhiteningError("reduced dimension out of range")
        if not (np.all(np.isfinite(self.mean)) and np.all(np.isfinite(self.projection))):
            raise WhiteningError("model contains NaN or Inf")

    @property
    def input_dim(self) -> int:
        return self.mean.shape[0]

    @property
    def output_dim(self) -> int:
        return self.projection.shape[1]


def save_embeddings(matrix: EmbeddingMatrix, path) -> None:
    with open(path, "wb") as fh:
        fh.write(SCEB_MAGIC)
        fh.write(struct.pack("<III", 1, matrix.count, matrix.dim))
        for pid in matrix.ids:
            raw = pid.encode("utf-8")
            fh.write(struct.pack("<I", len(raw)))
            fh.write(raw)
        fh.write(np.ascontiguousarray(matrix.data, dtype="<f4").tobytes())


def load_embeddings(path) -> EmbeddingMatrix:
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != SCEB_MAGIC:
        raise FormatError(f"bad magic {blob[:4]!r}, expected {SCEB_MAGIC!r}")
    if len(blob) < 16:
        raise FormatError("truncated header")
    version, count, dim = struct.unpack_from("<III", blob, 4)
    if version != 1:
        raise FormatError(f"unsupported version {version}")
    offset = 16
    ids = []
    for _ in range(count):
        if offset + 4 > len(blob):
            raise FormatError("truncated id table")
        (length,) = struct.unpack_from("<I", blob, offset)
        offset += 4
        if offset + length > len(blob):
            raise FormatError("truncated id table")
        ids.append(blob[offset : offset + length].decode("utf-8"))
        offset += length
    expected = count * dim * 4
    payload = blob[offset:]
    if len(payload) != expected:
        raise FormatError(
            f"payload holds {len(payload) // (dim * 4) if dim else 0} rows, header says {count}"
        )
    data = np.frombuffer(payload, dtype="<f4").reshape(count, dim)
    return EmbeddingMatrix(ids, data.copy())


def save_whitening(model: WhiteningModel, path) -> None:
    with open(path, "wb") as fh:
        fh.write(SCWH_MAGIC)
        fh.write(struct.pack("<III", 1, model.input_dim, model.output_dim))
        fh.write(struct.pack("<I", model.source_count))
        fh.write(np.ascontiguousarray(model.mean, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(model.projection, dtype="<f8").tobytes())


def load_whitening(path) -> WhiteningModel:
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != SCWH_MAGIC:
        raise FormatError(f"bad magic {blob[:4]!r}, expected {SCWH_MAGIC!r}")
    version, dim_in, dim_out = struct.unpack_from("<III", blob, 4)
    if version != 1:
        raise FormatError(f"unsupported version {version}")
    (source_count,) = struct.unpack_from("<I", blob, 16)
    offset = 20
    need = dim_in * 8 + dim_in * dim_out * 8
    if len(blob) - offset != need:
        raise FormatError("truncated whitening payload")
    mean = np.frombuffer(blob, dtype="<f8", count=dim_in, offset=offset).copy()
    offset += dim_in * 8
    projection = (
        np.frombuffer(blob, dtype="<f8", count=dim_in * dim_out, offset=offset)
        .reshape(dim_in, dim_out)
        .copy()
    )
    return WhiteningModel(mean, projection, source_count)


def fit_whitening(train: EmbeddingMatrix, d: int) -> WhiteningModel:
    """Fit a whitening model on the training embeddings.

    mean = column mean; covariance eigendecomposed with eigenvalues
    descending; projection = top-d eigenvectors scaled by 1/sqrt(eigenvalue).
    Eigenvalues below the floor count as unusable rank.  Each eigenvector's
    sign is canonicalized so its largest-magnitude entry is positive.
    """
    if train.count < 2:
        raise WhiteningError(f"need at least 2 rows to fit, got {train.count}")
    if not (1 <= d <= train.dim):
        raise WhiteningError(f"d={d} out of range for D={train.dim}")
    x = train.data.astype(np.float64)
    mean = x.mean(axis=0)
    centered = x - mean
    cov = centered.T @ centered / train.count
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = eigvals[order]
    eigvecs = eigvecs[:, order]
    usable = int(np.sum(eigvals > EIGENVALUE_FLOOR))
    if usable < d:
        raise WhiteningError(
            f"covariance has only {usable} usable eigenvalues, cannot whiten to d={d}"
        )
    vecs = eigvecs[:, :d]
    flip = np.sign(vecs[np.argmax(np.abs(vecs), axis=0), np.arange(d)])
    flip[flip == 0] = 1.0
    vecs = vecs * flip
    projection = vecs / np.sqrt(eigvals[:d])
    return WhiteningModel(mean, projection, train.count)


def usable_rank(train: EmbeddingMatrix) -> int:
    x = train.data.astype(np.float64)
    centered = x - x.mean(axis=0)
    cov = centered.T @ centered / train.count
    eigvals = np.linalg.eigvalsh(cov)
    return int(np.sum(eigvals > EIGENVALUE_FLOOR))


def apply_whitening(model: WhiteningModel, x: np.ndarray) -> np.ndarray:
    """Return (x − mean)·W for one vector or a stack of vectors."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != model.input_dim:
        raise WhiteningError(f"input has width {x.shape[-1]}, model expects {model.input_dim}")
    return (x - model.mean) @ model.projection


def semantic_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Squared L2 distance between whitened vectors; smaller means more similar."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    return float(diff @ diff)


def top_n(query: np.ndarray, ids: list[str], rows: np.ndarray, n: int = 10) -> list[tuple[str, float]]:
    """Exhaustive scan for the n nearest rows by squared L2 distance.

    Returns (id, distance) ascending by distance, ties broken by id;
    shorter than n when fewer rows exist.
    """
    if len(ids) == 0:
        raise ValueError("empty index")
    rows = np.asarray(rows, dtype=np.float64)
    query = np.asarray(query, dtype=np.float64)
    diffs = rows - query
    dists = np.einsum("ij,ij->i", diffs, diffs)
    ranked = sorted(zip(ids, dists.tolist()), key=lambda t: (t[1], t[0]))
    return ranked[:n]
