"""Planner gateway: prompt assembly, pluggable backends, and the
validate-or-repair loop that turns raw model output into a typed plan."""

from __future__ import annotations

import json
import logging
from pathlib import Path

import requests

from .errors import (
    BackendUnavailableError,
    NoCannedPlanError,
    PlanError,
    PlanningFailedError,
)
from .plan import extract_plan, parse, typecheck

log = logging.getLogger(__name__)

QUERY_TAG = "QUERY_TAG"

_GRAMMAR = """\
plan     = { binding , NL } , ret ;
binding  = IDENT , "=" , expr ;
ret      = "return" , expr , "," , expr ;
expr     = call | IDENT | literal ;
call     = IDENT , "(" , [ arg , { "," , arg } ] , ")" ;
arg      = [ IDENT , "=" ] , expr ;
literal  = STRING | NUMBER | "true" | "false" ;
comment  = "#" , to-end-of-line ;"""

_TEMPLATE = f"""\
# You are a planning model for a geospatial question answering engine.
# Solve the user query by composing expert calls in the GeoPlan language.

# GeoPlan grammar:
{_GRAMMAR}

# Rules:
# - Assign each intermediate result to a fresh name; names cannot be reassigned.
# - Refer only to names already bound above the current line.
# - String arguments use double quotes. Booleans are true / false.
# - No loops, conditionals, or function definitions exist; the select expert chooses between two values.

# Here are all the geospatial experts you have access to as API calls:
REGISTRY_TAG

# Query:
{QUERY_TAG}

# Your output must be exactly one fenced block in this format and nothing else,
# ending with a return of the textual answer and the most salient patch:
# ```geoplan
# <bindings>
# return <text>, <patch>
# ```
"""


def render_registry(signatures) -> str:
    stanzas = []
    for sig in signatures:
        stanzas.append(f"{sig.render()}\n#     {sig.doc}")
    return "\n".join(stanzas)


def assemble_prompt(query: str, signatures) -> str:
    prompt = _TEMPLATE.replace("REGISTRY_TAG", render_registry(signatures), 1)
    return prompt.replace(QUERY_TAG, query.strip(), 1)


# ---------------------------------------------------------------------------
# backends

class CannedBackend:
    """Replays plans from the golden-plans file; exact query match."""

    id = "canned"
    supports_elaboration = False

    def __init__(self, plans: dict):
        self.plans = {q.strip(): p for q, p in plans.items()}

    @classmethod
    def from_file(cls, path: Path) -> "CannedBackend":
        return cls(json.loads(Path(path).read_text()))

    def complete(self, prompt: str, query: str) -> str:
        plan = self.plans.get(query.strip())
        if plan is None:
            raise NoCannedPlanError(f"no canned plan for query {query.strip()!r}")
        return plan


class ScriptedBackend:
    """Test plumbing: emits a fixed sequence of outputs."""

    id = "scripted"
    supports_elaboration = False

    def __init__(self, outputs):
        self.outputs = list(outputs)
        self.calls = 0

    def complete(self, prompt: str, query: str) -> str:
        self.calls += 1
        if not self.outputs:
            raise BackendUnavailableError("scripted backend ran out of outputs")
        return self.outputs.pop(0)


class HostedBackend:
    """Chat-completion style JSON API, temperature pinned to 0."""

    supports_elaboration = True

    def __init__(self, id: str, base_url: str, api_key: str, model: str, timeout: float = 60.0):
        self.id = id
        self.base_url = base_url
        self.api_key = api_key
        self.model = model
        self.timeout = timeout

    def complete(self, prompt: str, query: str) -> str:
        payload = {
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": 0,
        }
        headers = {"Authorization": f"Bearer {self.api_key}"}
        try:
            resp = requests.post(self.base_url, json=payload, headers=headers, timeout=self.timeout)
            resp.raise_for_status()
            return resp.json()["choices"][0]["message"]["content"]
        except Exception as exc:
            raise BackendUnavailableError(f"{self.id} backend failed: {exc}") from exc


class LocalBackend:
    """Minimal text-completion endpoint for a locally served model."""

    id = "local"
    supports_elaboration = True

    def __init__(self, url: str, timeout: float = 60.0):
        self.url = url
        self.timeout = timeout

    def complete(self, prompt: str, query: str) -> str:
        try:
            resp = requests.post(
                self.url, json={"prompt": prompt, "temperature": 0}, timeout=self.timeout
            )
            resp.raise_for_status()
            return resp.json()["text"]
        except Exception as exc:
            raise BackendUnavailableError(f"local backend failed: {exc}") from exc


_HOSTED = {
    "hosted-a": ("https://api.openai.com/v1/chat/completions", "gpt-3.5-turbo-0125"),
    "hosted-b": ("https://api.anthropic.com/v1/chat/completions", "claude-3-opus-20240229"),
}


def build_backend(config):
    if config.backend == "canned":
        return CannedBackend.from_file(config.golden_plans_path)
    if config.backend == "local":
        if not config.local_planner_url:
            raise BackendUnavailableError("local backend selected but LOCAL_PLANNER_URL is not set")
        return LocalBackend(config.local_planner_url, config.backend_timeout_s)
    base_url, model = _HOSTED[config.backend]
    key = config.hosted_a_key if config.backend == "hosted-a" else config.hosted_b_key
    if not key:
        raise BackendUnavailableError(f"{config.backend} backend selected but its API key is not set")
    return HostedBackend(config.backend, base_url, key, model, config.backend_timeout_s)


# ---------------------------------------------------------------------------
# planning

def _validate(output: str, signatures):
    text = extract_plan(output)
    return typecheck(parse(text), signatures), text


def plan_query(query: str, backend, signatures):
    """Plan a query with at most one repair round.

    Returns (typed plan, plan text). Raises PlanningFailedError with both
    diagnostics when the repaired output fails too.
    """
    prompt = assemble_prompt(query, signatures)
    output = backend.complete(prompt, query)
    try:
        return _validate(output, signatures)
    except PlanError as first:
        diagnostic = first.one_line()
        log.info("plan for %r failed validation (%s), trying one repair", query, diagnostic)
        failed = getattr(first, "output", output)
        repair = f"{prompt}\n# Fix this error:\n{failed}\n# {diagnostic}\n"
        second_output = backend.complete(repair, query)
        try:
            return _validate(second_output, signatures)
        except PlanError as second:
            raise PlanningFailedError([diagnostic, second.one_line()]) from second


# ---------------------------------------------------------------------------
# elaboration

def _template(answer: str, expert_names) -> str:
    n = len(expert_names)
    if n == 0:
        return f"Answer: {answer}. Computed via 0 expert calls."
    return f"Answer: {answer}. Computed via {n} expert calls: {', '.join(expert_names)}."


def elaborate(query: str, answer: str, expert_names, backend=None) -> str:
    """Produce the elaborated answer; never fails the request."""
    fallback = _template(answer, expert_names)
    if backend is None or not getattr(backend, "supports_elaboration", False):
        return fallback
    prompt = (
        "Elaborate the computed answer to a geospatial query in at most three sentences.\n"
        f"Query: {query}\n"
        f"Computed answer: {answer}\n"
        f"Experts consulted: {', '.join(expert_names) if expert_names else 'none'}\n"
    )
    try:
        out = backend.complete(prompt, query).strip()
        return out or fallback
    except Exception:
        log.warning("elaboration backend failed, falling back to template", exc_info=True)
        return fallback
