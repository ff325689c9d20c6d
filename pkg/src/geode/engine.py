"""Query orchestration: plan, execute, visualize, elaborate, measure.

One Engine owns the clients, the planner backend, the metrics registry and
the session store, and turns a natural-language query into the response
body served over HTTP and printed by the CLI.
"""

import dataclasses
import threading
import time
from datetime import datetime, timezone

from . import experts, gateway
from .clients import (
    ElevationClient,
    FieldRetriever,
    FixtureStore,
    GeocoderClient,
    Transport,
    WeatherClient,
)
from .config import EngineConfig
from .errors import (
    BackendUnavailableError,
    ExpertRuntimeError,
    NoCannedPlanError,
    PlanError,
    PlanningFailedError,
)
from .metrics import MetricsRegistry
from .plan import execute
from .visualize import visualize


class TickClock:
    """Deterministic stand-in for perf_counter.

    Offline replays use it so repeated runs of the same query report
    byte-identical timing metrics.
    """

    def __init__(self, step_s: float = 0.001):
        self.now = 0.0
        self.step = step_s

    def __call__(self) -> float:
        self.now += self.step
        return self.now


class SessionStore:
    """In-memory, append-only conversation turns keyed by session id."""

    def __init__(self):
        self._lock = threading.Lock()
        self._turns: dict[str, list[dict]] = {}

    def append(self, session_id: str, query: str, answer: str):
        turn = {
            "query": query,
            "answer": answer,
            "at": datetime.now(timezone.utc).isoformat(),
        }
        with self._lock:
            self._turns.setdefault(session_id, []).append(turn)

    def turns(self, session_id: str) -> list[dict]:
        with self._lock:
            return list(self._turns.get(session_id, []))


class Engine:
    def __init__(self, config: EngineConfig | None = None):
        self.config = config or EngineConfig()
        store = FixtureStore(self.config.fixtures_dir)
        transport = Transport(self.config.net_mode, store)
        self.geocoder = GeocoderClient(transport, self.config.geocoder_base_url)
        weather = WeatherClient(transport, self.config.weather_base_url,
                                self.config.weather_api_key)
        elevation = ElevationClient(transport, self.config.elevation_base_url)
        self.retriever = FieldRetriever(weather, elevation, self.config)
        self.signatures = experts.signatures()
        self.backend = gateway.build_backend(self.config)
        self.metrics = MetricsRegistry()
        self.sessions = SessionStore()

    @property
    def deterministic(self) -> bool:
        """Replayed fixtures plus canned plans leave no source of noise."""
        return self.config.net_mode == "offline" and self.config.backend == "canned"

    def _backend_for(self, override: str | None):
        if not override or override == self.config.backend:
            return self.backend
        return gateway.build_backend(dataclasses.replace(self.config, backend=override))

    def handle_query(self, query, session_id=None, backend=None) -> tuple[int, dict]:
        """Run one query; returns (http_status, response_body)."""
        if not isinstance(query, str) or not query.strip():
            return 400, {"error": {"code": "E_BAD_REQUEST",
                                   "message": "query must be a nonempty string"}}
        try:
            planner = self._backend_for(backend)
        except ValueError as exc:
            return 400, {"error": {"code": "E_BAD_REQUEST", "message": str(exc)}}
        except BackendUnavailableError as exc:
            return 502, self._failure(exc)

        clock = TickClock() if self.deterministic else time.perf_counter
        started = clock()
        try:
            typed, plan_text = gateway.plan_query(query, planner, self.signatures)
        except PlanningFailedError as exc:
            return 422, self._failure(exc, started, clock, diagnostics=exc.diagnostics)
        except (PlanError, NoCannedPlanError) as exc:
            return 422, self._failure(exc, started, clock,
                                      diagnostics=[exc.one_line()])
        except BackendUnavailableError as exc:
            return 502, self._failure(exc, started, clock)
        planning_ms = (clock() - started) * 1000.0

        impls = experts.build_impls(
            geocoder=self.geocoder,
            retriever=self.retriever,
            elaborate=lambda answer: gateway.elaborate(query, answer, [], planner),
        )
        try:
            answer, salient, trace = execute(typed, impls, clock=clock)
        except ExpertRuntimeError as exc:
            self.metrics.record_trace(exc.trace)
            status = 502 if exc.upstream else 422
            return status, self._failure(exc, started, clock,
                                         planning_ms=planning_ms,
                                         trace=exc.trace,
                                         diagnostics=[exc.one_line()])
        self.metrics.record_trace(trace)

        artifact = visualize(salient)
        elaboration = gateway.elaborate(query, answer, trace.expert_names(), planner)
        freshness = [r.freshness_s for r in trace.records if r.freshness_s is not None]
        total_ms = (clock() - started) * 1000.0
        body = {
            "answer": answer,
            "elaboration": elaboration,
            "plan": plan_text,
            "map": artifact,
            "metrics": {
                "total_ms": total_ms,
                "planning_ms": planning_ms,
                "execution_ms": trace.total_ms,
                "experts": [{"name": r.name, "ms": r.duration_ms} for r in trace.records],
                "data_freshness_s": max(freshness) if freshness else None,
                "completion": True,
            },
        }
        self.metrics.record_request(True, total_ms)
        if session_id:
            self.sessions.append(session_id, query, answer)
        return 200, body

    def _failure(self, exc, started=None, clock=None, *, planning_ms=0.0,
                 trace=None, diagnostics=None) -> dict:
        total_ms = (clock() - started) * 1000.0 if clock and started is not None else 0.0
        records = trace.records if trace is not None else []
        body = {
            "error": {"code": exc.code, "message": exc.message},
            "metrics": {
                "total_ms": total_ms,
                "planning_ms": planning_ms,
                "execution_ms": trace.total_ms if trace is not None else 0.0,
                "experts": [{"name": r.name, "ms": r.duration_ms} for r in records],
                "data_freshness_s": None,
                "completion": False,
            },
        }
        if diagnostics:
            body["diagnostics"] = list(diagnostics)
        self.metrics.record_request(False, total_ms)
        return body
