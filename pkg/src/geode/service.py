"""HTTP face of the engine.

Endpoints return plain JSON bodies produced by Engine.handle_query; status
codes follow the error taxonomy (422 for plan problems, 502 for upstream
failures, 400 for malformed requests).
"""

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from starlette.concurrency import run_in_threadpool

from .config import EngineConfig
from .engine import Engine


def _bad_request(message: str) -> JSONResponse:
    return JSONResponse({"error": {"code": "E_BAD_REQUEST", "message": message}},
                        status_code=400)


def create_app(engine: Engine | None = None,
               config: EngineConfig | None = None) -> FastAPI:
    if engine is None:
        engine = Engine(config or EngineConfig.from_env())

    app = FastAPI(title="geode", docs_url=None, redoc_url=None)
    # The web client is served from a different origin during development.
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    app.state.engine = engine

    @app.post("/api/query")
    async def query(request: Request):
        try:
            payload = await request.json()
        except Exception:
            return _bad_request("body must be JSON")
        if not isinstance(payload, dict):
            return _bad_request("body must be a JSON object")
        text = payload.get("query")
        if not isinstance(text, str):
            return _bad_request('body must carry a string "query" field')
        session_id = payload.get("session_id")
        if session_id is not None and not isinstance(session_id, str):
            return _bad_request("session_id must be a string")
        backend = payload.get("backend")
        if backend is not None and not isinstance(backend, str):
            return _bad_request("backend must be a string")
        # handle_query does blocking I/O; keep the event loop free.
        status, body = await run_in_threadpool(
            engine.handle_query, text, session_id=session_id, backend=backend)
        return JSONResponse(body, status_code=status)

    @app.get("/api/experts")
    def experts():
        return {"experts": [
            {"name": sig.name, "signature": sig.render(), "doc": sig.doc}
            for sig in engine.signatures
        ]}

    @app.get("/api/metrics")
    def metrics():
        return engine.metrics.snapshot()

    @app.get("/api/health")
    def health():
        return {
            "status": "ok",
            "net_mode": engine.config.net_mode,
            "backend": engine.config.backend,
        }

    return app
