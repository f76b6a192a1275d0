"""HTTP surface: the paraphrase wire protocol.

    POST /paraphrase  {"id": str, "sentence": str, "num_return": int >= 1}
                  ->  200 {"id": str, "candidates": [str, ...]}
                      400 on a malformed body, 503 while the model loads
    GET  /health  ->  200 {"status": "loading" | "ok"}

Candidates come back in model-score order, deduplicated, never empty, at
most num_return of them.
"""
from __future__ import annotations

import logging
import threading

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .backends import make_backend
from .config import ServerConfig

logger = logging.getLogger("para_server")


def _clean(candidates: list[str], limit: int) -> list[str]:
    out: list[str] = []
    seen = set()
    for cand in candidates:
        if not isinstance(cand, str):
            continue
        text = cand.strip()
        key = " ".join(text.split())
        if not text or key in seen:
            continue
        seen.add(key)
        out.append(text)
        if len(out) == limit:
            break
    return out


def create_app(config: ServerConfig | None = None, backend=None,
               load_async: bool = True) -> FastAPI:
    config = config or ServerConfig.from_env()
    backend = backend if backend is not None else make_backend(
        config.model, device=config.device, max_batch=config.max_batch)

    app = FastAPI(title="para-server")
    app.state.config = config
    app.state.backend = backend
    app.state.status = "loading"

    def do_load():
        try:
            backend.load()
            app.state.status = "ok"
        except Exception:
            logger.exception("model load failed")
            app.state.status = "error"

    if load_async:
        threading.Thread(target=do_load, daemon=True).start()
    else:
        do_load()

    @app.get("/health")
    def health():
        return {"status": app.state.status}

    @app.post("/paraphrase")
    async def paraphrase(request: Request):
        try:
            body = await request.json()
        except Exception:
            return JSONResponse({"error": "body must be JSON"}, status_code=400)
        if not isinstance(body, dict):
            return JSONResponse({"error": "body must be an object"}, status_code=400)
        req_id = body.get("id")
        sentence = body.get("sentence")
        num_return = body.get("num_return")
        if not isinstance(req_id, str) or not req_id:
            return JSONResponse({"error": "'id' must be a nonempty string"}, status_code=400)
        if not isinstance(sentence, str) or not sentence.strip():
            return JSONResponse({"error": "'sentence' must be a nonempty string"}, status_code=400)
        if not isinstance(num_return, int) or isinstance(num_return, bool) or num_return < 1:
            return JSONResponse({"error": "'num_return' must be an integer >= 1"}, status_code=400)
        if app.state.status == "loading":
            return JSONResponse({"error": "model is still loading"}, status_code=503)
        if app.state.status == "error":
            return JSONResponse({"error": "model failed to load"}, status_code=500)
        candidates = app.state.backend.generate(sentence, num_return)
        return {"id": req_id, "candidates": _clean(candidates, num_return)}

    return app
