"""Record/replay transport shared by the upstream clients.

Every upstream call is identified by a canonical request string, hashed
into a fixture filename. Mode `live` passes through, `record` passes
through and persists the response, `offline` serves only from the store
and raises a fixture miss otherwise. Keys never include credentials.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Mapping

from ..errors import FixtureMissError, UpstreamUnavailableError


def _fmt_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.6f}"
    if isinstance(v, (list, tuple)):
        return ",".join(_fmt_value(x) for x in v)
    return str(v)


def canonical_request(client_id: str, op: str, params: Mapping) -> str:
    """Deterministic request serialization: sorted keys, floats at 6
    decimals. This string is the replay key, so it must never contain
    volatile parts (API keys, timestamps)."""
    body = "&".join(f"{k}={_fmt_value(params[k])}" for k in sorted(params))
    return f"{client_id}|{op}|{body}"


def request_key(canonical: str) -> str:
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _utc_now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_utc(stamp: str) -> datetime:
    return datetime.fromisoformat(stamp.replace("Z", "+00:00"))


@dataclass(frozen=True)
class UpstreamRecord:
    client_id: str
    request: str
    body: bytes
    recorded_at: str  # UTC, ISO 8601


class FixtureStore:
    """One JSON document per record, filename = sha256 of the canonical
    request; index.json lists every record. Access is serialized."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self._lock = threading.Lock()

    def get(self, canonical: str) -> UpstreamRecord | None:
        path = self.root / f"{request_key(canonical)}.json"
        with self._lock:
            if not path.exists():
                return None
            doc = json.loads(path.read_text())
        return UpstreamRecord(
            client_id=doc["client"],
            request=doc["request"],
            body=doc["body"].encode("utf-8"),
            recorded_at=doc["recorded_at"],
        )

    def put(self, record: UpstreamRecord) -> None:
        key = request_key(record.request)
        doc = {
            "client": record.client_id,
            "request": record.request,
            "recorded_at": record.recorded_at,
            "body": record.body.decode("utf-8"),
        }
        with self._lock:
            self.root.mkdir(parents=True, exist_ok=True)
            (self.root / f"{key}.json").write_text(json.dumps(doc, indent=1, sort_keys=True))
            self._rewrite_index()

    def _rewrite_index(self) -> None:
        entries = []
        for path in sorted(self.root.glob("*.json")):
            if path.name == "index.json":
                continue
            doc = json.loads(path.read_text())
            entries.append(
                {"key": path.stem, "client": doc["client"], "recorded_at": doc["recorded_at"]}
            )
        (self.root / "index.json").write_text(json.dumps({"records": entries}, indent=1))


class TokenBucket:
    """Simple blocking rate limiter; thread-safe."""

    def __init__(self, per_second: float):
        self.rate = per_second
        self.capacity = max(per_second, 1.0)
        self._tokens = self.capacity
        self._stamp = time.monotonic()
        self._lock = threading.Lock()

    def acquire(self) -> None:
        while True:
            with self._lock:
                now = time.monotonic()
                self._tokens = min(self.capacity, self._tokens + (now - self._stamp) * self.rate)
                self._stamp = now
                if self._tokens >= 1.0:
                    self._tokens -= 1.0
                    return
                wait = (1.0 - self._tokens) / self.rate
            time.sleep(wait)


class Transport:
    """Runs one upstream exchange under the configured network mode.

    `fetch` does the real HTTP call and returns the raw body text; it is
    only invoked in live and record modes.
    """

    def __init__(self, mode: str, store: FixtureStore | None, rate_per_second: float = 10.0):
        if mode in ("record", "offline") and store is None:
            raise ValueError(f"{mode} mode needs a fixture store")
        self.mode = mode
        self.store = store
        self.bucket = TokenBucket(rate_per_second)

    def exchange(
        self,
        client_id: str,
        op: str,
        params: Mapping,
        fetch: Callable[[], str],
    ) -> UpstreamRecord:
        canonical = canonical_request(client_id, op, params)
        if self.mode == "offline":
            record = self.store.get(canonical)
            if record is None:
                raise FixtureMissError(f"no fixture for request {canonical!r}")
            return record
        self.bucket.acquire()
        try:
            body = fetch()
        except Exception as exc:
            raise UpstreamUnavailableError(f"{client_id} request failed: {exc}") from exc
        record = UpstreamRecord(
            client_id=client_id,
            request=canonical,
            body=body.encode("utf-8"),
            recorded_at=_utc_now_iso(),
        )
        if self.mode == "record":
            self.store.put(record)
        return record
