import pytest
from fastapi.testclient import TestClient

from embedsvc.service import create_app

CODES = [
    "function transfer(address to, uint256 amount) public returns (bool) {}",
    "function balanceOf(address owner) public view returns (uint256) {}",
]


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


class TestHealth:
    def test_ready(self, client):
        response = client.get("/health")
        assert response.status_code == 200
        payload = response.json()
        assert payload["status"] == "ok"
        assert payload["dim"] == 768

    def test_loading_is_503(self):
        cold = TestClient(create_app(preload=False))
        assert cold.get("/health").status_code == 503
        assert cold.post("/embed", json={"texts": CODES}).status_code == 503


class TestEmbed:
    def test_shape(self, client):
        response = client.post("/embed", json={"texts": CODES})
        assert response.status_code == 200
        vectors = response.json()["vectors"]
        assert len(vectors) == 2
        assert all(len(row) == 768 for row in vectors)

    def test_repeat_identical_bytes(self, client):
        body = {"texts": CODES, "pooling": "first_last_avg", "max_length": 256}
        first = client.post("/embed", json=body)
        second = client.post("/embed", json=body)
        assert first.content == second.content

    def test_different_texts_differ(self, client):
        response = client.post("/embed", json={"texts": CODES})
        a, b = response.json()["vectors"]
        assert a != b

    def test_poolings_distinct(self, client):
        results = {
            pooling: client.post(
                "/embed", json={"texts": CODES[:1], "pooling": pooling}
            ).json()["vectors"][0]
            for pooling in ("cls", "mean", "first_last_avg")
        }
        assert results["cls"] != results["mean"]
        assert results["mean"] != results["first_last_avg"]

    def test_truncation_changes_vector(self, client):
        long_code = " ".join(f"statement{i}();" for i in range(300))
        short = client.post("/embed", json={"texts": [long_code], "max_length": 8})
        full = client.post("/embed", json={"texts": [long_code], "max_length": 512})
        assert short.json()["vectors"] != full.json()["vectors"]

    def test_empty_batch_rejected(self, client):
        assert client.post("/embed", json={"texts": []}).status_code == 400

    def test_oversized_batch_rejected(self, client):
        response = client.post("/embed", json={"texts": ["code"] * 65})
        assert response.status_code == 400

    def test_max_batch_accepted(self, client):
        response = client.post("/embed", json={"texts": ["code"] * 64})
        assert response.status_code == 200

    def test_excessive_max_length_rejected(self, client):
        response = client.post("/embed", json={"texts": CODES, "max_length": 513})
        assert response.status_code == 400

    def test_unknown_pooling_rejected(self, client):
        response = client.post("/embed", json={"texts": CODES, "pooling": "sum"})
        assert response.status_code == 400

    def test_model_reported(self, client):
        payload = client.post("/embed", json={"texts": CODES}).json()
        assert payload["model"]
        assert payload["pooling"] == "first_last_avg"
