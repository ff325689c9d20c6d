"""Recursive-descent parser producing a Plan.

Single assignment and backward-only references are enforced here, so every
Plan that parses is acyclic and terminates by construction.
"""

from __future__ import annotations

from ..errors import (
    E_MISSING_RETURN,
    E_REF_UNBOUND,
    E_RETURN_ARITY,
    E_SSA_REBIND,
    E_SYNTAX,
    PlanError,
)
from .ast import Binding, Call, Literal, Plan, Ref
from .lexer import RESERVED, Token, describe_token, tokenize


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def skip_newlines(self):
        while self.peek().kind == "nl":
            self.advance()

    def end_statement(self):
        tok = self.peek()
        if tok.kind not in ("nl", "eof"):
            raise PlanError(E_SYNTAX, f"unexpected {describe_token(tok)} after expression", tok.line, tok.col)
        if tok.kind == "nl":
            self.advance()

    def parse_expr(self, bound: set) -> object:
        tok = self.peek()
        if tok.kind == "string":
            self.advance()
            return Literal(tok.value, "text", tok.line, tok.col)
        if tok.kind == "number":
            self.advance()
            return Literal(tok.value, "number", tok.line, tok.col)
        if tok.kind == "ident":
            if tok.value in ("true", "false"):
                self.advance()
                return Literal(tok.value == "true", "bool", tok.line, tok.col)
            if tok.value == "return":
                raise PlanError(E_SYNTAX, "'return' is not an expression", tok.line, tok.col)
            if self.peek(1).kind == "(":
                return self.parse_call(bound)
            self.advance()
            if tok.value not in bound:
                raise PlanError(
                    E_REF_UNBOUND,
                    f"{tok.value!r} is referenced before it is bound",
                    tok.line,
                    tok.col,
                )
            return Ref(tok.value, tok.line, tok.col)
        raise PlanError(E_SYNTAX, f"expected an expression, found {describe_token(tok)}", tok.line, tok.col)

    def parse_call(self, bound: set) -> Call:
        name_tok = self.advance()
        self.advance()  # the opening paren, already seen
        args: list = []
        kwargs: list = []
        seen = set()
        if self.peek().kind == ")":
            self.advance()
            return Call(name_tok.value, (), (), name_tok.line, name_tok.col)
        while True:
            tok = self.peek()
            if tok.kind in ("nl", "eof"):
                raise PlanError(E_SYNTAX, f"unclosed call to {name_tok.value!r}", name_tok.line, name_tok.col)
            if tok.kind == "ident" and tok.value not in RESERVED and self.peek(1).kind == "=":
                if tok.value in seen:
                    raise PlanError(E_SYNTAX, f"duplicate keyword argument {tok.value!r}", tok.line, tok.col)
                self.advance()
                self.advance()
                kwargs.append((tok.value, self.parse_expr(bound)))
                seen.add(tok.value)
            else:
                if kwargs:
                    raise PlanError(E_SYNTAX, "positional argument after a named argument", tok.line, tok.col)
                args.append(self.parse_expr(bound))
            tok = self.peek()
            if tok.kind == ",":
                self.advance()
                continue
            if tok.kind == ")":
                self.advance()
                return Call(name_tok.value, tuple(args), tuple(kwargs), name_tok.line, name_tok.col)
            if tok.kind in ("nl", "eof"):
                raise PlanError(E_SYNTAX, f"unclosed call to {name_tok.value!r}", name_tok.line, name_tok.col)
            raise PlanError(
                E_SYNTAX,
                f"expected ',' or ')' in call to {name_tok.value!r}, found {describe_token(tok)}",
                tok.line,
                tok.col,
            )


def parse(text: str) -> Plan:
    parser = _Parser(tokenize(text))
    bindings: list[Binding] = []
    bound: set = set()
    while True:
        parser.skip_newlines()
        tok = parser.peek()
        if tok.kind == "eof":
            raise PlanError(E_MISSING_RETURN, "plan has no return statement", tok.line, tok.col)
        if tok.kind != "ident":
            raise PlanError(E_SYNTAX, f"expected a binding or return, found {describe_token(tok)}", tok.line, tok.col)
        if tok.value == "return":
            parser.advance()
            ret_text = parser.parse_expr(bound)
            comma = parser.peek()
            if comma.kind != ",":
                raise PlanError(
                    E_RETURN_ARITY,
                    "return takes exactly two values separated by a comma",
                    comma.line,
                    comma.col,
                )
            parser.advance()
            ret_patch = parser.parse_expr(bound)
            after = parser.peek()
            if after.kind == ",":
                raise PlanError(E_RETURN_ARITY, "return takes exactly two values, found a third", after.line, after.col)
            parser.end_statement()
            parser.skip_newlines()
            trailing = parser.peek()
            if trailing.kind != "eof":
                raise PlanError(E_SYNTAX, "unexpected content after return", trailing.line, trailing.col)
            return Plan(tuple(bindings), ret_text, ret_patch)
        name_tok = parser.advance()
        if name_tok.value in ("true", "false"):
            raise PlanError(E_SYNTAX, f"{name_tok.value!r} is reserved and cannot be bound", name_tok.line, name_tok.col)
        eq = parser.peek()
        if eq.kind != "=":
            raise PlanError(
                E_SYNTAX,
                f"expected '=' after {name_tok.value!r}, found {describe_token(eq)}",
                eq.line,
                eq.col,
            )
        parser.advance()
        if name_tok.value in bound:
            raise PlanError(
                E_SSA_REBIND,
                f"{name_tok.value!r} is already bound; each name may be assigned only once",
                name_tok.line,
                name_tok.col,
            )
        expr = parser.parse_expr(bound)
        parser.end_statement()
        bindings.append(Binding(name_tok.value, expr, name_tok.line))
        bound.add(name_tok.value)
