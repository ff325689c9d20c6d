"""Tree-walking interpreter for typed plans.

Implementations are plain callables taking the declared parameters
positionally (variadic tail appended). An implementation may return an
ExpertResult to attach upstream freshness to its trace record.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from ..errors import ExpertRuntimeError
from .typecheck import TCall, TLit, TRef, TypedPlan


@dataclass
class CallRecord:
    name: str
    duration_ms: float
    freshness_s: float | None
    outcome: str  # "ok" | "error"


@dataclass
class ExecutionTrace:
    records: list = field(default_factory=list)
    total_ms: float = 0.0

    def expert_names(self) -> list:
        return [r.name for r in self.records]


@dataclass
class ExpertResult:
    """Wrapper letting an implementation report value plus retrieval metadata."""

    value: object
    freshness_s: float | None = None
    partial: bool = False


def _eval(node, env, impls, clock, trace):
    if isinstance(node, TLit):
        return node.value
    if isinstance(node, TRef):
        return env[node.name]
    assert isinstance(node, TCall)
    args = [_eval(sub, env, impls, clock, trace) for _, sub in node.args]
    args += [_eval(sub, env, impls, clock, trace) for sub in node.extras]
    impl = impls[node.name]
    start = clock()
    try:
        result = impl(*args)
    except Exception as exc:
        trace.records.append(CallRecord(node.name, (clock() - start) * 1000.0, None, "error"))
        raise ExpertRuntimeError(node.name, node.line, exc) from exc
    duration = (clock() - start) * 1000.0
    freshness = None
    if isinstance(result, ExpertResult):
        freshness = result.freshness_s
        result = result.value
    trace.records.append(CallRecord(node.name, duration, freshness, "ok"))
    return result


def execute(plan: TypedPlan, impls: dict, clock=None):
    """Run a typed plan, returning (answer, salient patch, trace).

    A failing expert aborts the plan with ExpertRuntimeError; the partial
    trace is attached to the error.
    """
    clock = clock or time.perf_counter
    trace = ExecutionTrace()
    start = clock()
    env: dict = {}
    try:
        for name, node in plan.bindings:
            env[name] = _eval(node, env, impls, clock, trace)
        answer = _eval(plan.ret_text, env, impls, clock, trace)
        salient = _eval(plan.ret_patch, env, impls, clock, trace)
    except ExpertRuntimeError as exc:
        trace.total_ms = (clock() - start) * 1000.0
        exc.trace = trace
        raise
    trace.total_ms = (clock() - start) * 1000.0
    return answer, salient, trace
