"""Chat-completion gateway: remote, mock, and replay backends with caching."""

from __future__ import annotations

import hashlib
import json
import os
import random
import re
import tempfile
import threading
import time
from dataclasses import dataclass

import httpx

DEFAULT_MODEL = "gpt-3.5-turbo"
API_KEY_ENV = "SCC_API_KEY"
CACHE_DIR_ENV = "SCC_CACHE_DIR"

_CAP_RE = re.compile(r"The length should not exceed (\d+) words")


class LlmError(Exception):
    pass


class CacheMissError(LlmError):
    pass


class AuthError(LlmError):
    pass


@dataclass(frozen=True)
class LlmRequest:
    prompt: str
    model: str = DEFAULT_MODEL
    temperature: float = 0.0
    max_tokens: int = 256
    tag: str = ""

    def __post_init__(self):
        if not self.prompt:
            raise LlmError("prompt must be non-empty")
        if not (0.0 <= self.temperature <= 2.0):
            raise LlmError(f"temperature {self.temperature} out of [0, 2]")


@dataclass
class LlmResponse:
    text: str
    prompt_tokens: int
    completion_tokens: int
    backend: str
    cache_hit: bool = False


def cache_key(request: LlmRequest) -> str:
    """32-byte content digest over the request fields that affect the output."""
    payload = json.dumps(
        {
            "model": request.model,
            "prompt": request.prompt,
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        },
        sort_keys=True,
        ensure_ascii=False,
    )
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def postprocess(text: str) -> str:
    """Normalize a raw completion into a single-line comment."""
    text = text.strip()
    while len(text) >= 2 and text[0] == text[-1] and text[0] in "\"'`":
        text = text[1:-1].strip()
    return " ".join(text.split())


class ResponseCache:
    """Directory of JSON files named by hex digest; writes are atomic."""

    def __init__(self, directory):
        self.directory = str(directory)
        os.makedirs(self.directory, exist_ok=True)
        self._lock = threading.Lock()

    def _path(self, key: str) -> str:
        return os.path.join(self.directory, f"{key}.json")

    def get(self, key: str) -> dict | None:
        path = self._path(key)
        if not os.path.exists(path):
            return None
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)

    def put(self, key: str, value: dict) -> None:
        with self._lock:
            fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    json.dump(value, fh, ensure_ascii=False)
                os.replace(tmp, self._path(key))
            finally:
                if os.path.exists(tmp):
                    os.unlink(tmp)


def parse_demo_comments(prompt: str) -> list[str]:
    """Extract demonstration comments (groups of '#'-prefixed lines) in prompt order."""
    groups: list[str] = []
    current: list[str] = []
    for line in prompt.splitlines():
        if line.startswith("#"):
            current.append(line.lstrip("#").strip())
        elif current:
            groups.append(" ".join(current))
            current = []
    if current:
        groups.append(" ".join(current))
    return groups


class MockBackend:
    """Deterministic offline backend.

    Behaviors: echo_top1 returns the most similar demo comment parsed from
    the prompt; fixed returns a configured string; truncate_ground_truth
    returns the oracle comment for the request tag cut to the prompt's
    word cap.
    """

    name = "mock"

    def __init__(
        self,
        behavior: str = "echo_top1",
        fixed_text: str = "",
        oracle: dict[str, str] | None = None,
        most_similar_last: bool = True,
    ):
        if behavior not in ("echo_top1", "fixed", "truncate_ground_truth"):
            raise LlmError(f"unknown mock behavior {behavior!r}")
        self.behavior = behavior
        self.fixed_text = fixed_text
        self.oracle = oracle or {}
        self.most_similar_last = most_similar_last

    def complete(self, request: LlmRequest) -> LlmResponse:
        if self.behavior == "fixed":
            text = self.fixed_text
        elif self.behavior == "echo_top1":
            comments = parse_demo_comments(request.prompt)
            if not comments:
                text = ""
            else:
                text = comments[-1] if self.most_similar_last else comments[0]
        else:
            truth = self.oracle.get(request.tag)
            if truth is None:
                raise LlmError(f"no oracle comment for tag {request.tag!r}")
            m = _CAP_RE.search(request.prompt)
            cap = int(m.group(1)) if m else len(truth.split())
            text = " ".join(truth.split()[:cap])
        words = len(request.prompt.split())
        return LlmResponse(text, words, len(text.split()), self.name)


class ReplayBackend:
    """Serves only from the cache; any miss is an explicit error."""

    name = "replay"

    def __init__(self, cache: ResponseCache):
        self.cache = cache

    def complete(self, request: LlmRequest) -> LlmResponse:
        entry = self.cache.get(cache_key(request))
        if entry is None:
            raise CacheMissError(f"no cached response for request tag {request.tag!r}")
        return LlmResponse(
            entry["text"],
            entry.get("prompt_tokens", 0),
            entry.get("completion_tokens", 0),
            self.name,
            cache_hit=True,
        )


class RemoteBackend:
    """HTTP chat-completion client with retries, backoff, and bounded concurrency."""

    name = "remote"

    def __init__(
        self,
        base_url: str = "https://api.openai.com/v1",
        cache: ResponseCache | None = None,
        timeout: float = 60.0,
        max_retries: int = 5,
        backoff_base: float = 1.0,
        backoff_factor: float = 2.0,
        max_concurrency: int = 4,
        transport: httpx.BaseTransport | None = None,
        rng: random.Random | None = None,
        sleep=time.sleep,
    ):
        api_key = os.environ.get(API_KEY_ENV)
        if not api_key:
            raise AuthError(f"environment variable {API_KEY_ENV} is not set")
        self.cache = cache
        self.max_retries = max_retries
        self.backoff_base = backoff_base
        self.backoff_factor = backoff_factor
        self._rng = rng or random.Random()
        self._sleep = sleep
        self._semaphore = threading.BoundedSemaphore(max_concurrency)
        self._client = httpx.Client(
            base_url=base_url,
            timeout=timeout,
            headers={"Authorization": f"Bearer {api_key}"},
            transport=transport,
        )

    def complete(self, request: LlmRequest) -> LlmResponse:
        key = cache_key(request)
        if self.cache is not None:
            entry = self.cache.get(key)
            if entry is not None:
                return LlmResponse(
                    entry["text"],
                    entry.get("prompt_tokens", 0),
                    entry.get("completion_tokens", 0),
                    self.name,
                    cache_hit=True,
                )
        body = {
            "model": request.model,
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }
        data = self._post_with_retries(body)
        text = postprocess(data["choices"][0]["message"]["content"])
        usage = data.get("usage", {})
        entry = {
            "text": text,
            "prompt_tokens": usage.get("prompt_tokens", 0),
            "completion_tokens": usage.get("completion_tokens", 0),
            "raw": data,
        }
        if self.cache is not None:
            # persist before returning so every served answer is replayable
            self.cache.put(key, entry)
        return LlmResponse(text, entry["prompt_tokens"], entry["completion_tokens"], self.name)

    def _post_with_retries(self, body: dict) -> dict:
        last_error: Exception | None = None
        for attempt in range(self.max_retries):
            if attempt:
                delay = self.backoff_base * self.backoff_factor ** (attempt - 1)
                self._sleep(self._rng.uniform(0.0, delay))
            try:
                with self._semaphore:
                    response = self._client.post("/chat/completions", json=body)
            except httpx.TimeoutException as exc:
                last_error = exc
                continue
            if response.status_code in (401, 403):
                raise AuthError(f"authentication failed (HTTP {response.status_code})")
            if response.status_code == 429 or response.status_code >= 500:
                retry_after = response.headers.get("retry-after")
                if retry_after is not None:
                    try:
                        self._sleep(float(retry_after))
                    except ValueError:
                        pass
                last_error = LlmError(f"HTTP {response.status_code}: {response.text[:200]}")
                continue
            response.raise_for_status()
            return response.json()
        raise LlmError(f"remote call failed after {self.max_retries} attempts: {last_error}")


def complete(request: LlmRequest, backend) -> LlmResponse:
    """Run one request against the chosen backend; response text is normalized."""
    response = backend.complete(request)
    response.text = postprocess(response.text)
    return response
