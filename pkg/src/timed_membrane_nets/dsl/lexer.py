"""Tokenizer shared by the membrane system and Petri net formats."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Union

from ..const import MAX_INT_DIGITS
from ..exception import ParseError


@dataclass(frozen=True)
class SourceSpan:
    """Half-open ``[start, end)`` character range with its 1-based position."""

    line: int
    column: int
    start: int
    end: int

    def __str__(self) -> str:
        """Render as ``line:column``."""
        return f"{self.line}:{self.column}"


class TokenKind(str, Enum):
    """Token categories; values are what error messages show."""

    IDENT = "identifier"
    INT = "integer"
    LBRACE = "'{'"
    RBRACE = "'}'"
    LPAREN = "'('"
    RPAREN = "')'"
    SEMI = "';'"
    COLON = "':'"
    COMMA = "','"
    EQUALS = "'='"
    CARET = "'^'"
    AT = "'@'"
    ARROW = "'->'"
    MINUS = "'-'"
    EOF = "end of input"


@dataclass(frozen=True)
class Token:
    """One token with its text and location."""

    kind: TokenKind
    text: str
    span: SourceSpan

    def describe(self) -> str:
        """Render for error messages."""
        if self.kind is TokenKind.EOF:
            return self.kind.value
        return f"'{self.text}'"


_PUNCTUATION = {
    "->": TokenKind.ARROW,
    "{": TokenKind.LBRACE,
    "}": TokenKind.RBRACE,
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    ";": TokenKind.SEMI,
    ":": TokenKind.COLON,
    ",": TokenKind.COMMA,
    "=": TokenKind.EQUALS,
    "^": TokenKind.CARET,
    "@": TokenKind.AT,
    "-": TokenKind.MINUS,
}

_TOKEN_RE = re.compile(
    r"(?P<space>[ \t\r\n]+)"
    r"|(?P<comment>#[^\n]*)"
    r"|(?P<ident>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<int>[0-9]+)"
    r"|(?P<punct>->|[{}();:,=^@-])"
)


def decode(source: Union[str, bytes]) -> str:
    """Return ``source`` as text; invalid UTF-8 is a parse error."""
    if isinstance(source, str):
        return source
    try:
        return source.decode("utf-8")
    except UnicodeDecodeError as exc:
        span = SourceSpan(1, 1, 0, 0)
        raise ParseError(
            span, ["UTF-8 text"], f"byte 0x{source[exc.start]:02x}"
        ) from None


def tokenize(source: Union[str, bytes]) -> list[Token]:
    """Split ``source`` into tokens ending with an EOF token."""
    text = decode(source)
    tokens: list[Token] = []
    position = 0
    line = 1
    line_start = 0
    while position < len(text):
        match = _TOKEN_RE.match(text, position)
        column = position - line_start + 1
        if match is None:
            span = SourceSpan(line, column, position, position + 1)
            raise ParseError(span, ["a token"], repr(text[position]))
        end = match.end()
        group = match.lastgroup
        value = match.group()
        span = SourceSpan(line, column, position, end)
        if group == "ident":
            tokens.append(Token(TokenKind.IDENT, value, span))
        elif group == "int":
            if len(value) > MAX_INT_DIGITS:
                raise ParseError(
                    span,
                    [TokenKind.INT.value],
                    f"'{value[:MAX_INT_DIGITS]}...'",
                    f"integer longer than {MAX_INT_DIGITS} digits",
                )
            tokens.append(Token(TokenKind.INT, value, span))
        elif group == "punct":
            tokens.append(Token(_PUNCTUATION[value], value, span))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = position + value.rindex("\n") + 1
        position = end
    column = position - line_start + 1
    tokens.append(
        Token(TokenKind.EOF, "", SourceSpan(line, column, position, position))
    )
    return tokens
