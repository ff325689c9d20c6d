"""Pulling a plan out of raw planner output.

Planner models wrap plans in prose, markdown fences, and typographic
quotes. Extraction preference order: a fenced block tagged geoplan, any
fenced block whose lines all look like plan statements, then the maximal
trailing run of statement-shaped lines. The result is stable under
re-extraction.
"""

from __future__ import annotations

import re

from ..errors import E_EXTRACT, PlanError
from .lexer import line_is_statement

_FENCE = re.compile(r"```[ \t]*(\w*)[ \t]*\n(.*?)```", re.DOTALL)

_SMART_QUOTES = {
    "‘": "'",
    "’": "'",
    "“": '"',
    "”": '"',
}
_ZERO_WIDTH = dict.fromkeys(map(ord, "​‌‍﻿"), None)


def _normalize(text: str) -> str:
    for smart, plain in _SMART_QUOTES.items():
        text = text.replace(smart, plain)
    return text.translate(_ZERO_WIDTH)


def _is_plan_shaped(text: str) -> bool:
    lines = text.split("\n")
    return all(line_is_statement(line) for line in lines) and any(
        line.strip() and not line.strip().startswith("#") for line in lines
    )


def _trailing_run(text: str) -> str | None:
    lines = text.split("\n")
    start = len(lines)
    for i in range(len(lines) - 1, -1, -1):
        if line_is_statement(lines[i]):
            start = i
        else:
            break
    run = lines[start:]
    if not any(line.strip() and not line.strip().startswith("#") for line in run):
        return None
    return "\n".join(run)


def extract_plan(planner_output: str) -> str:
    text = _normalize(planner_output)
    fenced = _FENCE.findall(text)
    for tag, body in fenced:
        if tag.lower() == "geoplan":
            if _is_plan_shaped(body):
                return body.strip()
            inner = _trailing_run(body)
            if inner is not None:
                return inner.strip()
    for _, body in fenced:
        if _is_plan_shaped(body):
            return body.strip()
    run = _trailing_run(text)
    if run is not None:
        return run.strip()
    err = PlanError(E_EXTRACT, "planner output contains no extractable plan")
    err.output = planner_output
    raise err
