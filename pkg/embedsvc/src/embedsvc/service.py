"""HTTP embedding service: POST /embed and GET /health."""

from __future__ import annotations

import threading

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .encoder import DIM, POOLINGS, make_encoder

MAX_BATCH = 64
MAX_LENGTH_LIMIT = 512


class EmbedRequest(BaseModel):
    texts: list[str]
    pooling: str = "first_last_avg"
    max_length: int = Field(default=256, ge=1)


class EmbedResponse(BaseModel):
    vectors: list[list[float]]
    model: str
    pooling: str


def create_app(model_path: str | None = None, preload: bool = True) -> FastAPI:
    app = FastAPI(title="embedsvc")
    app.state.encoder = None
    app.state.model_path = model_path
    lock = threading.Lock()

    def load():
        with lock:
            if app.state.encoder is None:
                app.state.encoder = make_encoder(app.state.model_path)
        return app.state.encoder

    app.state.load = load
    if preload:
        load()

    @app.get("/health")
    def health():
        encoder = app.state.encoder
        if encoder is None:
            raise HTTPException(status_code=503, detail="model loading")
        return {"status": "ok", "model": encoder.name, "dim": DIM}

    @app.post("/embed", response_model=EmbedResponse)
    def embed(request: EmbedRequest):
        encoder = app.state.encoder
        if encoder is None:
            raise HTTPException(status_code=503, detail="model loading")
        if not (1 <= len(request.texts) <= MAX_BATCH):
            raise HTTPException(
                status_code=400,
                detail=f"batch size must be 1..{MAX_BATCH}, got {len(request.texts)}",
            )
        if request.max_length > MAX_LENGTH_LIMIT:
            raise HTTPException(
                status_code=400,
                detail=f"max_length must be <= {MAX_LENGTH_LIMIT}, got {request.max_length}",
            )
        if request.pooling not in POOLINGS:
            raise HTTPException(
                status_code=400, detail=f"pooling must be one of {list(POOLINGS)}"
            )
        with lock:  # one inference worker
            vectors = encoder.encode(request.texts, request.pooling, request.max_length)
        return EmbedResponse(
            vectors=[[float(x) for x in row] for row in vectors],
            model=encoder.name,
            pooling=request.pooling,
        )

    return app
