"""Protocol-conformance tests (the server's acceptance gate).

Responses must validate against the paraphrase wire schema: id echoed,
at most num_return nonempty candidates, deterministic repeats, and a health
endpoint that moves from "loading" to "ok".
"""
import threading
import time

import pytest
from fastapi.testclient import TestClient
from jsonschema import validate

from para_server import ServerConfig, StubBackend, create_app

RESPONSE_SCHEMA = {
    "type": "object",
    "required": ["id", "candidates"],
    "properties": {
        "id": {"type": "string"},
        "candidates": {
            "type": "array",
            "items": {"type": "string", "minLength": 1},
        },
    },
    "additionalProperties": False,
}

HEALTH_SCHEMA = {
    "type": "object",
    "required": ["status"],
    "properties": {"status": {"type": "string", "enum": ["loading", "ok", "error"]}},
    "additionalProperties": False,
}


@pytest.fixture
def client():
    app = create_app(ServerConfig(model="stub"), backend=StubBackend(),
                     load_async=False)
    return TestClient(app)


def _ask(client, sentence="Tim has 5 books.", num_return=7, req_id="req-1"):
    return client.post("/paraphrase", json={
        "id": req_id, "sentence": sentence, "num_return": num_return})


class TestParaphraseEndpoint:
    def test_response_matches_schema(self, client):
        resp = _ask(client)
        assert resp.status_code == 200
        validate(resp.json(), RESPONSE_SCHEMA)

    def test_id_echoed(self, client):
        assert _ask(client, req_id="abc").json()["id"] == "abc"

    def test_candidate_count_capped(self, client):
        for n in (1, 2, 7):
            body = _ask(client, num_return=n).json()
            assert 0 < len(body["candidates"]) <= n

    def test_candidates_nonempty_and_deduplicated(self, client):
        cands = _ask(client).json()["candidates"]
        assert all(c.strip() for c in cands)
        assert len(set(cands)) == len(cands)

    def test_deterministic_repeats(self, client):
        first = _ask(client).json()
        second = _ask(client).json()
        assert first == second

    def test_rank_order_stable(self, client):
        # the top-1 answer is the prefix of the top-3 list
        one = _ask(client, num_return=1).json()["candidates"]
        three = _ask(client, num_return=3).json()["candidates"]
        assert three[: len(one)] == one

    @pytest.mark.parametrize("payload", [
        {"id": "a", "sentence": "Tim has 5 books.", "num_return": 0},
        {"id": "a", "sentence": "Tim has 5 books.", "num_return": -2},
        {"id": "a", "sentence": "Tim has 5 books.", "num_return": True},
        {"id": "a", "sentence": "", "num_return": 3},
        {"id": "a", "sentence": "   ", "num_return": 3},
        {"id": "a", "num_return": 3},
        {"sentence": "Tim has 5 books.", "num_return": 3},
        {"id": "", "sentence": "x", "num_return": 3},
    ])
    def test_malformed_body_is_400(self, client, payload):
        assert client.post("/paraphrase", json=payload).status_code == 400

    def test_non_json_body_is_400(self, client):
        resp = client.post("/paraphrase", content=b"not json",
                           headers={"Content-Type": "application/json"})
        assert resp.status_code == 400


class _SlowBackend(StubBackend):
    def __init__(self):
        self.release = threading.Event()

    def load(self):
        self.release.wait(timeout=10)


class TestHealth:
    def test_ok_after_sync_load(self, client):
        resp = client.get("/health")
        validate(resp.json(), HEALTH_SCHEMA)
        assert resp.json() == {"status": "ok"}

    def test_loading_then_ok_transition(self):
        backend = _SlowBackend()
        app = create_app(ServerConfig(model="stub"), backend=backend)
        with TestClient(app) as client:
            assert client.get("/health").json() == {"status": "loading"}
            # the protocol endpoint refuses work while loading
            assert _ask(client).status_code == 503
            backend.release.set()
            deadline = time.monotonic() + 5
            while time.monotonic() < deadline:
                if client.get("/health").json()["status"] == "ok":
                    break
                time.sleep(0.01)
            assert client.get("/health").json() == {"status": "ok"}
            assert _ask(client).status_code == 200

    def test_health_idempotent(self, client):
        assert client.get("/health").json() == client.get("/health").json()


class TestConfig:
    def test_from_env(self, monkeypatch):
        monkeypatch.setenv("PARA_MODEL", "stub")
        monkeypatch.setenv("PARA_PORT", "9001")
        monkeypatch.setenv("PARA_MAX_BATCH", "4")
        cfg = ServerConfig.from_env()
        assert cfg.model == "stub" and cfg.port == 9001 and cfg.max_batch == 4

    def test_validation(self):
        with pytest.raises(ValueError):
            ServerConfig(port=0)
        with pytest.raises(ValueError):
            ServerConfig(max_batch=0)


class TestAcceptanceSecondary:
    def test_criterion_protocol_conformance(self):
        """id echo, count cap, determinism, schema validity, loading -> ok."""
        backend = _SlowBackend()
        app = create_app(ServerConfig(model="stub"), backend=backend)
        client = TestClient(app)
        assert client.get("/health").json()["status"] == "loading"
        backend.release.set()
        deadline = time.monotonic() + 5
        while client.get("/health").json()["status"] != "ok":
            assert time.monotonic() < deadline
            time.sleep(0.01)

        resp = _ask(client, req_id="echo-me", num_return=5)
        assert resp.status_code == 200
        body = resp.json()
        validate(body, RESPONSE_SCHEMA)
        assert body["id"] == "echo-me"
        assert len(body["candidates"]) <= 5
        assert body == _ask(client, req_id="echo-me", num_return=5).json()
        print("ACCEPTANCE PASS: paraphrase protocol conformance")
