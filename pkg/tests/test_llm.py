import json
import threading

import httpx
import pytest

from scc import llm, promptgen
from scc.retrieval import Demonstration

DEMOS = [
    Demonstration("d1", "function a() public {}", "returns owner balance", 0.1, 0.9),
    Demonstration("d2", "function b() public {}", "burns tokens from the caller", 0.2, 0.5),
]
QUERY = "function c() public {}"


def few_shot_prompt():
    return promptgen.build_prompt(QUERY, DEMOS, mode="few").text


class TestCacheKey:
    def test_deterministic(self):
        r = llm.LlmRequest(prompt="hello")
        assert llm.cache_key(r) == llm.cache_key(llm.LlmRequest(prompt="hello"))

    def test_sensitive_to_fields(self):
        base = llm.LlmRequest(prompt="hello")
        assert llm.cache_key(base) != llm.cache_key(llm.LlmRequest(prompt="hello", temperature=1.0))
        assert llm.cache_key(base) != llm.cache_key(llm.LlmRequest(prompt="hello", model="other"))

    def test_tag_ignored(self):
        a = llm.LlmRequest(prompt="hello", tag="x")
        b = llm.LlmRequest(prompt="hello", tag="y")
        assert llm.cache_key(a) == llm.cache_key(b)

    def test_is_64_hex_chars(self):
        key = llm.cache_key(llm.LlmRequest(prompt="p"))
        assert len(key) == 64
        int(key, 16)


class TestRequestValidation:
    def test_empty_prompt(self):
        with pytest.raises(llm.LlmError):
            llm.LlmRequest(prompt="")

    def test_temperature_range(self):
        with pytest.raises(llm.LlmError):
            llm.LlmRequest(prompt="p", temperature=3.0)


class TestMockBackend:
    def test_echo_top1(self):
        backend = llm.MockBackend("echo_top1")
        response = llm.complete(llm.LlmRequest(prompt=few_shot_prompt()), backend)
        assert response.text == "returns owner balance"

    def test_echo_top1_zero_shot(self):
        prompt = promptgen.build_prompt(QUERY, [], mode="zero").text
        backend = llm.MockBackend("echo_top1")
        assert backend.complete(llm.LlmRequest(prompt=prompt)).text == ""

    def test_fixed(self):
        backend = llm.MockBackend("fixed", fixed_text="ok")
        for prompt in ("a", "b"):
            assert backend.complete(llm.LlmRequest(prompt=prompt)).text == "ok"

    def test_truncate_ground_truth(self):
        backend = llm.MockBackend("truncate_ground_truth", oracle={"q1": "a b c d e"})
        prompt = "code here\nThe length should not exceed 3 words."
        response = backend.complete(llm.LlmRequest(prompt=prompt, tag="q1"))
        assert response.text == "a b c"

    def test_unknown_behavior(self):
        with pytest.raises(llm.LlmError):
            llm.MockBackend("nope")


class TestCache:
    def test_put_get_round_trip(self, tmp_path):
        cache = llm.ResponseCache(tmp_path)
        cache.put("k" * 64, {"text": "hello", "prompt_tokens": 3})
        assert cache.get("k" * 64) == {"text": "hello", "prompt_tokens": 3}

    def test_absent_key_miss(self, tmp_path):
        assert llm.ResponseCache(tmp_path).get("0" * 64) is None

    def test_identical_puts_one_entry(self, tmp_path):
        cache = llm.ResponseCache(tmp_path)
        cache.put("a" * 64, {"text": "x"})
        cache.put("a" * 64, {"text": "x"})
        files = [p for p in tmp_path.iterdir() if p.suffix == ".json"]
        assert len(files) == 1

    def test_replay_hits_cache(self, tmp_path):
        cache = llm.ResponseCache(tmp_path)
        request = llm.LlmRequest(prompt="p")
        cache.put(llm.cache_key(request), {"text": "cached answer"})
        backend = llm.ReplayBackend(cache)
        response = llm.complete(request, backend)
        assert response.text == "cached answer"
        assert response.cache_hit

    def test_replay_miss_is_error(self, tmp_path):
        backend = llm.ReplayBackend(llm.ResponseCache(tmp_path))
        with pytest.raises(llm.CacheMissError):
            backend.complete(llm.LlmRequest(prompt="p"))


class TestPostprocess:
    def test_strips_quotes_and_newlines(self):
        assert llm.postprocess('  "line one\nline two"  ') == "line one line two"

    def test_plain_text_unchanged(self):
        assert llm.postprocess("already clean") == "already clean"


def chat_response(text):
    return {
        "choices": [{"message": {"role": "assistant", "content": text}}],
        "usage": {"prompt_tokens": 10, "completion_tokens": 5},
    }


@pytest.fixture
def api_key(monkeypatch):
    monkeypatch.setenv(llm.API_KEY_ENV, "test-key")


class TestRemoteBackend:
    def test_requires_credentials(self, monkeypatch):
        monkeypatch.delenv(llm.API_KEY_ENV, raising=False)
        with pytest.raises(llm.AuthError):
            llm.RemoteBackend()

    def test_success_and_caching(self, tmp_path, api_key):
        calls = []

        def handler(request):
            calls.append(request)
            return httpx.Response(200, json=chat_response("a generated comment"))

        backend = llm.RemoteBackend(
            base_url="https://example.test/v1",
            cache=llm.ResponseCache(tmp_path),
            transport=httpx.MockTransport(handler),
            sleep=lambda _: None,
        )
        request = llm.LlmRequest(prompt="describe this code")
        first = backend.complete(request)
        second = backend.complete(request)
        assert first.text == "a generated comment"
        assert not first.cache_hit
        assert second.cache_hit
        assert len(calls) == 1

    def test_wire_format(self, tmp_path, api_key):
        seen = {}

        def handler(request):
            seen["body"] = json.loads(request.content)
            seen["auth"] = request.headers.get("authorization")
            seen["path"] = request.url.path
            return httpx.Response(200, json=chat_response("ok"))

        backend = llm.RemoteBackend(
            base_url="https://example.test/v1",
            transport=httpx.MockTransport(handler),
            sleep=lambda _: None,
        )
        backend.complete(llm.LlmRequest(prompt="the prompt", temperature=0.5, max_tokens=64))
        assert seen["path"].endswith("/chat/completions")
        assert seen["auth"] == "Bearer test-key"
        assert seen["body"] == {
            "model": "gpt-3.5-turbo",
            "messages": [{"role": "user", "content": "the prompt"}],
            "temperature": 0.5,
            "max_tokens": 64,
        }

    def test_retries_on_rate_limit(self, tmp_path, api_key):
        attempts = []

        def handler(request):
            attempts.append(1)
            if len(attempts) < 3:
                return httpx.Response(429, headers={"retry-after": "0"})
            return httpx.Response(200, json=chat_response("eventually"))

        backend = llm.RemoteBackend(
            base_url="https://example.test/v1",
            transport=httpx.MockTransport(handler),
            sleep=lambda _: None,
        )
        assert backend.complete(llm.LlmRequest(prompt="p")).text == "eventually"
        assert len(attempts) == 3

    def test_gives_up_after_max_retries(self, api_key):
        def handler(request):
            return httpx.Response(500)

        backend = llm.RemoteBackend(
            base_url="https://example.test/v1",
            transport=httpx.MockTransport(handler),
            max_retries=3,
            sleep=lambda _: None,
        )
        with pytest.raises(llm.LlmError, match="after 3 attempts"):
            backend.complete(llm.LlmRequest(prompt="p"))

    def test_auth_failure_not_retried(self, api_key):
        attempts = []

        def handler(request):
            attempts.append(1)
            return httpx.Response(401)

        backend = llm.RemoteBackend(
            base_url="https://example.test/v1",
            transport=httpx.MockTransport(handler),
            sleep=lambda _: None,
        )
        with pytest.raises(llm.AuthError):
            backend.complete(llm.LlmRequest(prompt="p"))
        assert len(attempts) == 1

    def test_bounded_concurrency(self, api_key):
        in_flight = 0
        peak = 0
        lock = threading.Lock()
        release = threading.Event()

        def handler(request):
            nonlocal in_flight, peak
            with lock:
                in_flight += 1
                peak = max(peak, in_flight)
            release.wait(timeout=2)
            with lock:
                in_flight -= 1
            return httpx.Response(200, json=chat_response("done"))

        backend = llm.RemoteBackend(
            base_url="https://example.test/v1",
            transport=httpx.MockTransport(handler),
            max_concurrency=2,
            sleep=lambda _: None,
        )
        threads = [
            threading.Thread(
                target=lambda i=i: backend.complete(llm.LlmRequest(prompt=f"p{i}"))
            )
            for i in range(6)
        ]
        for t in threads:
            t.start()
        import time

        time.sleep(0.3)
        release.set()
        for t in threads:
            t.join()
        assert peak <= 2

    def test_response_persisted_before_return(self, tmp_path, api_key):
        cache = llm.ResponseCache(tmp_path)

        def handler(request):
            return httpx.Response(200, json=chat_response("persist me"))

        backend = llm.RemoteBackend(
            base_url="https://example.test/v1",
            cache=cache,
            transport=httpx.MockTransport(handler),
            sleep=lambda _: None,
        )
        request = llm.LlmRequest(prompt="p")
        backend.complete(request)
        entry = cache.get(llm.cache_key(request))
        assert entry is not None and entry["text"] == "persist me"
