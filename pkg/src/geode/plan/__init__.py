"""The plan language: extraction, parsing, checking, execution."""

from .ast import Binding, Call, Literal, Plan, Ref, print_expr, print_plan
from .extract import extract_plan
from .interp import CallRecord, ExecutionTrace, ExpertResult, execute
from .lexer import line_is_statement, tokenize
from .parser import parse
from .typecheck import TCall, TLit, TRef, TypedPlan, typecheck
from .types import ANY, BOOL, EnumTy, ExpertSignature, NUMBER, PATCH, Param, REQUIRED, TEXT

__all__ = [
    "ANY",
    "BOOL",
    "Binding",
    "Call",
    "CallRecord",
    "EnumTy",
    "ExecutionTrace",
    "ExpertResult",
    "ExpertSignature",
    "Literal",
    "NUMBER",
    "PATCH",
    "Param",
    "Plan",
    "REQUIRED",
    "Ref",
    "TCall",
    "TLit",
    "TRef",
    "TEXT",
    "TypedPlan",
    "execute",
    "extract_plan",
    "line_is_statement",
    "parse",
    "print_expr",
    "print_plan",
    "tokenize",
    "typecheck",
]
