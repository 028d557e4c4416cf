"""Token kinds shared by the pipeline and stub lexers."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from ..diagnostics import SourceSpan


class TokenKind(enum.Enum):
    IDENT = "identifier"
    INT = "integer literal"
    FLOAT = "float literal"
    STRING = "string literal"
    # punctuation
    LBRACE = "'{'"
    RBRACE = "'}'"
    LPAREN = "'('"
    RPAREN = "')'"
    LBRACKET = "'['"
    RBRACKET = "']'"
    COMMA = "','"
    DOT = "'.'"
    COLON = "':'"
    SEMI = "';'"
    EQUALS = "'='"
    ARROW = "'->'"
    AT = "'@'"
    MINUS = "'-'"
    PIPE = "'|'"
    STAR = "'*'"
    PLUS = "'+'"
    QUESTION = "'?'"
    UNDERSCORE = "'_'"
    LT = "'<'"
    GT = "'>'"
    LE = "'<='"
    GE = "'>='"
    EQEQ = "'=='"
    NE = "'!='"
    NEWLINE = "newline"
    EOF = "end of input"
    # keywords
    KW_PIPELINE = "'pipeline'"
    KW_FUN = "'fun'"
    KW_CLASS = "'class'"
    KW_ENUM = "'enum'"
    KW_ATTR = "'attr'"
    KW_PROTOCOL = "'protocol'"
    KW_SCHEMA = "'schema'"
    KW_REQUIRE = "'require'"
    KW_UNION = "'union'"
    KW_SUB = "'sub'"
    KW_WHERE = "'where'"
    KW_IT = "'it'"
    KW_TRUE = "'true'"
    KW_FALSE = "'false'"
    KW_RESERVED = "reserved word"  # if/else/while/for: never valid


KEYWORDS = {
    "pipeline": TokenKind.KW_PIPELINE,
    "fun": TokenKind.KW_FUN,
    "class": TokenKind.KW_CLASS,
    "enum": TokenKind.KW_ENUM,
    "attr": TokenKind.KW_ATTR,
    "protocol": TokenKind.KW_PROTOCOL,
    "schema": TokenKind.KW_SCHEMA,
    "require": TokenKind.KW_REQUIRE,
    "union": TokenKind.KW_UNION,
    "sub": TokenKind.KW_SUB,
    "where": TokenKind.KW_WHERE,
    "it": TokenKind.KW_IT,
    "true": TokenKind.KW_TRUE,
    "false": TokenKind.KW_FALSE,
    # control flow is deliberately absent from the language
    "if": TokenKind.KW_RESERVED,
    "else": TokenKind.KW_RESERVED,
    "while": TokenKind.KW_RESERVED,
    "for": TokenKind.KW_RESERVED,
}


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    span: SourceSpan

    def describe(self):
        if self.kind in (TokenKind.IDENT, TokenKind.INT, TokenKind.FLOAT):
            return f"{self.kind.value} '{self.text}'"
        return self.kind.value
