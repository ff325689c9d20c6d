"""Static checking of a parsed plan against the expert registry.

Produces a typed tree with defaults filled in, so the interpreter never
needs the signature table. Enum parameters only accept string literals:
anything that could fail an enum check at runtime is rejected here.
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass

from ..errors import (
    E_ARITY,
    E_ENUM,
    E_RETURN_TYPE,
    E_TYPE,
    E_UNKNOWN_EXPERT,
    PlanError,
)
from .ast import Call, Literal, Plan, Ref
from .types import ANY, BOOL, EnumTy, NUMBER, PATCH, TEXT, type_name

_LITERAL_TYPES = {"text": TEXT, "number": NUMBER, "bool": BOOL}


@dataclass(frozen=True)
class TLit:
    value: object
    ty: str


@dataclass(frozen=True)
class TRef:
    name: str
    ty: str


@dataclass(frozen=True)
class TCall:
    name: str
    args: tuple  # ordered (param name, typed expr), defaults included
    extras: tuple  # variadic tail
    ty: str
    line: int
    col: int


@dataclass(frozen=True)
class TypedPlan:
    source: Plan
    bindings: tuple  # of (name, typed expr)
    ret_text: object
    ret_patch: object


def _position(expr):
    return getattr(expr, "line", 0), getattr(expr, "col", 0)


class _Checker:
    def __init__(self, signatures):
        self.by_name = {s.name: s for s in signatures}
        self.env: dict[str, str] = {}

    def check(self, expr):
        if isinstance(expr, Literal):
            return TLit(expr.value, _LITERAL_TYPES[expr.kind])
        if isinstance(expr, Ref):
            return TRef(expr.name, self.env[expr.name])
        return self.check_call(expr)

    def check_call(self, call: Call) -> TCall:
        sig = self.by_name.get(call.name)
        if sig is None:
            close = difflib.get_close_matches(call.name, list(self.by_name), n=1)
            hint = f"; did you mean {close[0]!r}?" if close else ""
            raise PlanError(E_UNKNOWN_EXPERT, f"unknown expert {call.name!r}{hint}", call.line, call.col)

        params = sig.params
        names = {p.name for p in params}
        if len(call.args) > len(params) and not sig.variadic:
            raise PlanError(
                E_ARITY,
                f"{sig.name} takes at most {len(params)} arguments, got {len(call.args)}",
                call.line,
                call.col,
            )
        assigned: dict[str, object] = {}
        for param, arg in zip(params, call.args):
            assigned[param.name] = arg
        extras = call.args[len(params):]
        for kw_name, arg in call.kwargs:
            if kw_name not in names:
                line, col = _position(arg)
                raise PlanError(E_ARITY, f"{sig.name} has no parameter {kw_name!r}", line or call.line, col)
            if kw_name in assigned:
                line, col = _position(arg)
                raise PlanError(
                    E_ARITY,
                    f"parameter {kw_name!r} of {sig.name} given both positionally and by name",
                    line or call.line,
                    col,
                )
            assigned[kw_name] = arg

        bound = []
        for param in params:
            if param.name in assigned:
                bound.append((param.name, self.check_arg(sig, param, assigned[param.name])))
            elif param.required:
                raise PlanError(
                    E_ARITY,
                    f"{sig.name} is missing required parameter {param.name!r}",
                    call.line,
                    call.col,
                )
            else:
                ty = TEXT if isinstance(param.ty, EnumTy) else param.ty
                bound.append((param.name, TLit(param.default, ty)))
        typed_extras = tuple(self.check(e) for e in extras)

        ty = sig.returns
        if sig.name == "select":
            ty = self.unify_select(bound, call)
        if sig.name == "format":
            self.check_format(bound, typed_extras, call)
        return TCall(sig.name, tuple(bound), typed_extras, ty, call.line, call.col)

    def check_arg(self, sig, param, expr):
        if isinstance(param.ty, EnumTy):
            if not (isinstance(expr, Literal) and expr.kind == "text"):
                line, col = _position(expr)
                raise PlanError(
                    E_TYPE,
                    f"parameter {param.name!r} of {sig.name} requires a literal string",
                    line,
                    col,
                )
            if expr.value not in param.ty.values:
                allowed = ", ".join(repr(v) for v in param.ty.values)
                raise PlanError(
                    E_ENUM,
                    f"{expr.value!r} is not a valid {param.name} for {sig.name}; allowed values: {allowed}",
                    expr.line,
                    expr.col,
                )
            return TLit(expr.value, TEXT)
        typed = self.check(expr)
        if param.ty != ANY and typed.ty != param.ty:
            line, col = _position(expr)
            raise PlanError(
                E_TYPE,
                f"parameter {param.name!r} of {sig.name} expects {type_name(param.ty)}, got {type_name(typed.ty)}",
                line,
                col,
            )
        return typed

    def unify_select(self, bound, call):
        tx = bound[1][1].ty
        ty = bound[2][1].ty
        if tx == ty:
            return tx
        if tx == ANY:
            return ty
        if ty == ANY:
            return tx
        raise PlanError(
            E_TYPE,
            f"select branches must have the same type, got {type_name(tx)} and {type_name(ty)}",
            call.line,
            call.col,
        )

    def check_format(self, bound, extras, call):
        template = bound[0][1]
        if not isinstance(template, TLit) or not isinstance(template.value, str):
            return  # placeholder count checked at runtime for non-literal templates
        placeholders = template.value.count("{}")
        if placeholders != len(extras):
            raise PlanError(
                E_ARITY,
                f"format template has {placeholders} placeholders but {len(extras)} arguments",
                call.line,
                call.col,
            )


def typecheck(plan: Plan, signatures) -> TypedPlan:
    checker = _Checker(signatures)
    bindings = []
    for b in plan.bindings:
        typed = checker.check(b.expr)
        checker.env[b.name] = typed.ty
        bindings.append((b.name, typed))
    ret_text = checker.check(plan.ret_text)
    ret_patch = checker.check(plan.ret_patch)
    if ret_text.ty != TEXT:
        line, col = _position(plan.ret_text)
        raise PlanError(
            E_RETURN_TYPE,
            f"first return value must be Text, got {type_name(ret_text.ty)}",
            line,
            col,
        )
    if ret_patch.ty != PATCH:
        line, col = _position(plan.ret_patch)
        raise PlanError(
            E_RETURN_TYPE,
            f"second return value must be Patch, got {type_name(ret_patch.ty)}",
            line,
            col,
        )
    return TypedPlan(plan, tuple(bindings), ret_text, ret_patch)
