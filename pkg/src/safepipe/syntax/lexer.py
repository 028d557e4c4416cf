"""Hand-rolled lexer for pipeline and stub sources.

Newlines are emitted as tokens (they terminate statements); consecutive
blank lines collapse to a single NEWLINE.  Comments (`//` line, `/* */`
non-nesting block) and other whitespace are dropped.
"""

from __future__ import annotations

from ..diagnostics import Diagnostic, SourceSpan, error
from .tokens import KEYWORDS, Token, TokenKind

_PUNCT2 = {
    "->": TokenKind.ARROW,
    "<=": TokenKind.LE,
    ">=": TokenKind.GE,
    "==": TokenKind.EQEQ,
    "!=": TokenKind.NE,
}

_PUNCT1 = {
    "{": TokenKind.LBRACE,
    "}": TokenKind.RBRACE,
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    "[": TokenKind.LBRACKET,
    "]": TokenKind.RBRACKET,
    ",": TokenKind.COMMA,
    ".": TokenKind.DOT,
    ":": TokenKind.COLON,
    ";": TokenKind.SEMI,
    "=": TokenKind.EQUALS,
    "@": TokenKind.AT,
    "-": TokenKind.MINUS,
    "|": TokenKind.PIPE,
    "*": TokenKind.STAR,
    "+": TokenKind.PLUS,
    "?": TokenKind.QUESTION,
    "<": TokenKind.LT,
    ">": TokenKind.GT,
}

_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}


def lex(source: str, file: str = "<input>") -> tuple[list[Token], list[Diagnostic]]:
    tokens: list[Token] = []
    diags: list[Diagnostic] = []
    i = 0
    line, col = 1, 1
    n = len(source)

    def span(sl, sc, el, ec):
        return SourceSpan(file, sl, sc, el, ec)

    def advance(k=1):
        nonlocal i, line, col
        for _ in range(k):
            if i < n and source[i] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1

    while i < n:
        c = source[i]
        sl, sc = line, col
        if c == "\n":
            advance()
            if tokens and tokens[-1].kind != TokenKind.NEWLINE:
                tokens.append(Token(TokenKind.NEWLINE, "\n", span(sl, sc, sl, sc)))
            continue
        if c in " \t\r":
            advance()
            continue
        if source.startswith("//", i):
            while i < n and source[i] != "\n":
                advance()
            continue
        if source.startswith("/*", i):
            advance(2)
            while i < n and not source.startswith("*/", i):
                advance()
            advance(2)
            continue
        if c == '"':
            advance()
            chars = []
            terminated = False
            while i < n:
                if source[i] == '"':
                    advance()
                    terminated = True
                    break
                if source[i] == "\n":
                    break
                if source[i] == "\\" and i + 1 < n:
                    esc = source[i + 1]
                    chars.append(_ESCAPES.get(esc, esc))
                    advance(2)
                else:
                    chars.append(source[i])
                    advance()
            sp = span(sl, sc, line, max(col - 1, 1))
            if not terminated:
                diags.append(error("E001", "unterminated string literal", sp))
            else:
                tokens.append(Token(TokenKind.STRING, "".join(chars), sp))
            continue
        if c.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            is_float = False
            if j < n and source[j] == "." and j + 1 < n and source[j + 1].isdigit():
                is_float = True
                j += 1
                while j < n and source[j].isdigit():
                    j += 1
            if j < n and source[j] in "eE":
                k = j + 1
                if k < n and source[k] in "+-":
                    k += 1
                if k < n and source[k].isdigit():
                    is_float = True
                    j = k
                    while j < n and source[j].isdigit():
                        j += 1
            text = source[i:j]
            advance(j - i)
            kind = TokenKind.FLOAT if is_float else TokenKind.INT
            tokens.append(Token(kind, text, span(sl, sc, line, col - 1)))
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            text = source[i:j]
            advance(j - i)
            sp = span(sl, sc, line, col - 1)
            if text == "_":
                tokens.append(Token(TokenKind.UNDERSCORE, text, sp))
            else:
                tokens.append(Token(KEYWORDS.get(text, TokenKind.IDENT), text, sp))
            continue
        two = source[i : i + 2]
        if two in _PUNCT2:
            advance(2)
            tokens.append(Token(_PUNCT2[two], two, span(sl, sc, sl, sc + 1)))
            continue
        if c in _PUNCT1:
            advance()
            tokens.append(Token(_PUNCT1[c], c, span(sl, sc, sl, sc)))
            continue
        diags.append(error("E002", f"illegal character {c!r}", span(sl, sc, sl, sc)))
        advance()

    # trailing NEWLINE is noise for the parser; EOF terminates instead
    while tokens and tokens[-1].kind == TokenKind.NEWLINE:
        tokens.pop()
    tokens.append(Token(TokenKind.EOF, "", span(line, col, line, col)))
    return tokens, diags
