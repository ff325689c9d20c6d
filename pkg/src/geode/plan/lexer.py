"""Tokenizer for the plan language.

Token kinds: ident, string, number, and the punctuation "(", ")", ",", "=",
plus "nl" and a final "eof". Comments run from # to end of line. Signs are
part of number literals; there are no operators.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import E_BAD_LITERAL, E_SYNTAX, PlanError

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "\\": "\\", "'": "'", '"': '"'}

RESERVED = frozenset({"return", "true", "false"})


@dataclass(frozen=True)
class Token:
    kind: str
    value: object
    line: int
    col: int


def describe_token(tok: Token) -> str:
    if tok.kind == "ident":
        return f"identifier {tok.value!r}"
    if tok.kind == "string":
        return "a string"
    if tok.kind == "number":
        return "a number"
    if tok.kind == "nl":
        return "end of line"
    if tok.kind == "eof":
        return "end of input"
    return f"'{tok.kind}'"


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            tokens.append(Token("nl", "\n", line, col))
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
                col += 1
            continue
        if ch in "(),=":
            tokens.append(Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        if ch in "'\"":
            quote = ch
            start_line, start_col = line, col
            i += 1
            col += 1
            parts: list[str] = []
            while True:
                if i >= n or text[i] == "\n":
                    raise PlanError(E_BAD_LITERAL, "unterminated string literal", start_line, start_col)
                c = text[i]
                if c == quote:
                    i += 1
                    col += 1
                    break
                if c == "\\":
                    if i + 1 >= n or text[i + 1] == "\n":
                        raise PlanError(E_BAD_LITERAL, "unterminated string literal", start_line, start_col)
                    parts.append(_ESCAPES.get(text[i + 1], text[i + 1]))
                    i += 2
                    col += 2
                    continue
                parts.append(c)
                i += 1
                col += 1
            tokens.append(Token("string", "".join(parts), start_line, start_col))
            continue
        m = _NUMBER.match(text, i)
        if m is not None:
            lexeme = m.group()
            end = m.end()
            # 1.2.3 and 12abc are malformed numbers, not two tokens
            if end < n and (text[end] == "." or _IDENT.match(text, end)):
                raise PlanError(E_BAD_LITERAL, f"malformed number starting at {lexeme!r}", line, col)
            tokens.append(Token("number", float(lexeme), line, col))
            i = end
            col += end - m.start()
            continue
        m = _IDENT.match(text, i)
        if m is not None:
            tokens.append(Token("ident", m.group(), line, col))
            col += m.end() - i
            i = m.end()
            continue
        raise PlanError(E_SYNTAX, f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


_STATEMENT_SHAPE = re.compile(r"\s*(?:#|$|return\b|[A-Za-z_][A-Za-z0-9_]*\s*=)")


def line_is_statement(text: str) -> bool:
    """Whether a single line is shaped like plan content: blank, comment,
    a binding head, or a return.

    Shape only, not lexability: a binding line with a broken literal still
    counts, so it reaches the parser and gets a precise diagnostic instead
    of silently dropping out of the extracted plan.
    """
    return _STATEMENT_SHAPE.match(text) is not None
