"""Process-wide counters for requests and expert calls.

All mutation happens under one lock so the registry can be shared by the
HTTP worker threads.
"""

import math
import threading


def percentile(values, p: float):
    """Nearest-rank percentile; None for an empty series."""
    if not values:
        return None
    ordered = sorted(values)
    rank = max(1, math.ceil(p / 100.0 * len(ordered)))
    return ordered[rank - 1]


class MetricsRegistry:
    def __init__(self):
        self._lock = threading.Lock()
        self._succeeded = 0
        self._failed = 0
        self._latencies = []
        self._experts = {}

    def record_request(self, success: bool, total_ms: float):
        with self._lock:
            if success:
                self._succeeded += 1
            else:
                self._failed += 1
            self._latencies.append(float(total_ms))

    def record_expert(self, name: str, duration_ms: float, error: bool):
        with self._lock:
            row = self._experts.setdefault(name, {"calls": 0, "errors": 0, "latencies": []})
            row["calls"] += 1
            if error:
                row["errors"] += 1
            row["latencies"].append(float(duration_ms))

    def record_trace(self, trace):
        for record in trace.records:
            self.record_expert(record.name, record.duration_ms, record.outcome == "error")

    def snapshot(self) -> dict:
        with self._lock:
            total = self._succeeded + self._failed
            experts = {}
            for name in sorted(self._experts):
                row = self._experts[name]
                experts[name] = {
                    "calls": row["calls"],
                    "errors": row["errors"],
                    "latency_ms": {
                        "p50": percentile(row["latencies"], 50),
                        "p95": percentile(row["latencies"], 95),
                    },
                }
            return {
                "requests": {
                    "total": total,
                    "succeeded": self._succeeded,
                    "failed": self._failed,
                    "completion_rate": (self._succeeded / total) if total else None,
                    "latency_ms": {
                        "p50": percentile(self._latencies, 50),
                        "p95": percentile(self._latencies, 95),
                    },
                },
                "experts": experts,
            }
