"""Hand-written lexer for the RTL Verilog subset.

Comments (`//`, `/* */`) are dropped.  Lines introduced by a backtick
compiler directive are skipped with a warning.  `$ident` lexes as a
system identifier so unsupported system tasks degrade gracefully at the
parser level instead of killing the whole file.
"""

from __future__ import annotations

import re

from veripg.frontend.source import SourceFile
from veripg.frontend.tokens import KEYWORDS, MULTI_OPS, SINGLE_OPS, Token


class LexError(Exception):
    def __init__(self, message: str, lineno: int):
        super().__init__(f"L{lineno}: {message}")
        self.lineno = lineno


class UnterminatedComment(LexError):
    pass


class UnterminatedString(LexError):
    pass


class IllegalCharacter(LexError):
    pass


_SIZED_RE = re.compile(r"(\d[\d_]*)?'[sS]?[bodhBODH][0-9a-fA-FxXzZ_?]+")
_NUMBER_RE = re.compile(r"\d[\d_]*")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_$]*")


def tokenize(src: SourceFile, warnings: list | None = None) -> list[Token]:
    """Lex `src` into a token list.

    `warnings` collects (lineno, message) pairs for skipped directives.
    Raises a LexError subclass on unterminated comments/strings and on
    characters outside the subset's alphabet.
    """
    text = src.text
    n = len(text)
    pos = 0
    line = 1
    out: list[Token] = []

    while pos < n:
        ch = text[pos]

        if ch == "\n":
            line += 1
            pos += 1
            continue
        if ch in " \t\r\f":
            pos += 1
            continue

        if text.startswith("//", pos):
            nl = text.find("\n", pos)
            pos = n if nl < 0 else nl
            continue

        if text.startswith("/*", pos):
            end = text.find("*/", pos + 2)
            if end < 0:
                raise UnterminatedComment("unterminated block comment", line)
            line += text.count("\n", pos, end)
            pos = end + 2
            continue

        if ch == "`":
            if warnings is not None:
                warnings.append((line, "compiler directive skipped"))
            nl = text.find("\n", pos)
            pos = n if nl < 0 else nl
            continue

        if ch == '"':
            end = pos + 1
            while end < n and text[end] != '"':
                if text[end] == "\n":
                    raise UnterminatedString("unterminated string literal", line)
                if text[end] == "\\":
                    end += 1
                end += 1
            if end >= n:
                raise UnterminatedString("unterminated string literal", line)
            out.append(Token("string", text[pos : end + 1], line))
            pos = end + 1
            continue

        m = _SIZED_RE.match(text, pos)
        if m:
            out.append(Token("sized_number", m.group(), line))
            pos = m.end()
            continue

        m = _NUMBER_RE.match(text, pos)
        if m:
            out.append(Token("number", m.group(), line))
            pos = m.end()
            continue

        if ch == "$":
            m = _IDENT_RE.match(text, pos + 1)
            if m:
                out.append(Token("sysident", "$" + m.group(), line))
                pos = m.end()
                continue
            raise IllegalCharacter("stray '$'", line)

        m = _IDENT_RE.match(text, pos)
        if m:
            word = m.group()
            kind = f"kw_{word}" if word in KEYWORDS else "ident"
            out.append(Token(kind, word, line))
            pos = m.end()
            continue

        matched = False
        for op, kind in MULTI_OPS:
            if text.startswith(op, pos):
                out.append(Token(kind, op, line))
                pos += len(op)
                matched = True
                break
        if matched:
            continue

        if ch in SINGLE_OPS:
            out.append(Token(SINGLE_OPS[ch], ch, line))
            pos += 1
            continue

        raise IllegalCharacter(f"illegal character {ch!r}", line)

    return out
