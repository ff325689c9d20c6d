"""Plan AST.

Nodes compare structurally: source positions are carried for diagnostics
but excluded from equality, so printing a plan and reparsing it yields an
equal tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Literal:
    value: object
    kind: str  # "text" | "number" | "bool"
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Ref:
    name: str
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple = ()
    kwargs: tuple = ()  # of (name, expr)
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Binding:
    name: str
    expr: object
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Plan:
    bindings: tuple
    ret_text: object
    ret_patch: object


def _quote(s: str) -> str:
    out = (
        s.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\t", "\\t")
        .replace("\r", "\\r")
    )
    return f'"{out}"'


def print_expr(expr) -> str:
    if isinstance(expr, Literal):
        if expr.kind == "text":
            return _quote(expr.value)
        if expr.kind == "bool":
            return "true" if expr.value else "false"
        return repr(expr.value)
    if isinstance(expr, Ref):
        return expr.name
    parts = [print_expr(a) for a in expr.args]
    parts += [f"{name}={print_expr(v)}" for name, v in expr.kwargs]
    return f"{expr.name}({', '.join(parts)})"


def print_plan(plan: Plan) -> str:
    lines = [f"{b.name} = {print_expr(b.expr)}" for b in plan.bindings]
    lines.append(f"return {print_expr(plan.ret_text)}, {print_expr(plan.ret_patch)}")
    return "\n".join(lines)
