"""One real-socket check: the protocol holds over actual HTTP, not just ASGI."""
import socket
import threading
import time

import httpx
import pytest
import uvicorn

from para_server import ServerConfig, StubBackend, create_app


@pytest.fixture
def live_url():
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        port = sock.getsockname()[1]
    app = create_app(ServerConfig(model="stub", port=port), backend=StubBackend(),
                     load_async=False)
    server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=port,
                                           log_level="error"))
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.monotonic() + 10
    url = f"http://127.0.0.1:{port}"
    while time.monotonic() < deadline:
        try:
            if httpx.get(f"{url}/health", timeout=1).status_code == 200:
                break
        except httpx.HTTPError:
            time.sleep(0.05)
    yield url
    server.should_exit = True
    thread.join(timeout=5)


def test_wire_roundtrip(live_url):
    health = httpx.get(f"{live_url}/health").json()
    assert health == {"status": "ok"}
    resp = httpx.post(f"{live_url}/paraphrase", json={
        "id": "wire-1", "sentence": "Tim has 5 books.", "num_return": 3})
    assert resp.status_code == 200
    body = resp.json()
    assert body["id"] == "wire-1"
    assert 0 < len(body["candidates"]) <= 3
    assert all(isinstance(c, str) and c for c in body["candidates"])
