"""Indentation-sensitive tokenizer.

Emits NAME/NUMBER/OP tokens plus NEWLINE, INDENT and DEDENT, Python
style. Logical lines continue across physical lines inside brackets or
after a trailing backslash. `#` starts a comment; indentation must use
spaces.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import PsdlSyntaxError

NAME = "NAME"
NUMBER = "NUMBER"
OP = "OP"
NEWLINE = "NEWLINE"
INDENT = "INDENT"
DEDENT = "DEDENT"
EOF = "EOF"

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?")
_PUNCT = "+-*/()[],.:="


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    col: int

    def __repr__(self) -> str:
        return f"{self.kind}({self.value!r})@{self.line}:{self.col}"


def tokenize(source: str) -> list[Token]:
    lines = source.split("\n")
    tokens: list[Token] = []
    indents = [0]
    depth = 0               # bracket nesting across physical lines
    continued = False       # previous physical line ended with a backslash
    line_had_tokens = False

    for lineno, raw in enumerate(lines, start=1):
        pos = 0
        if depth == 0 and not continued:
            # Measure indentation of a fresh logical line.
            while pos < len(raw) and raw[pos] == " ":
                pos += 1
            if pos < len(raw) and raw[pos] == "\t":
                raise PsdlSyntaxError("tabs are not allowed in indentation", lineno, pos + 1)
            rest = raw[pos:]
            if rest == "" or rest.startswith("#"):
                continue  # blank or comment-only line
            indent = pos
            if indent > indents[-1]:
                indents.append(indent)
                tokens.append(Token(INDENT, "", lineno, 1))
            else:
                while indent < indents[-1]:
                    indents.pop()
                    tokens.append(Token(DEDENT, "", lineno, 1))
                if indent != indents[-1]:
                    raise PsdlSyntaxError("unindent does not match any outer level", lineno, pos + 1)
            line_had_tokens = False
        continued = False

        while pos < len(raw):
            c = raw[pos]
            if c == " ":
                pos += 1
                continue
            if c == "\t":
                raise PsdlSyntaxError("tab characters are not allowed", lineno, pos + 1)
            if c == "#":
                pos = len(raw)
                break
            if c == "\\":
                if raw[pos + 1:].strip() == "":
                    continued = True
                    pos = len(raw)
                    break
                raise PsdlSyntaxError("unexpected character after line continuation", lineno, pos + 2)
            m = _NAME_RE.match(raw, pos)
            if m:
                tokens.append(Token(NAME, m.group(), lineno, pos + 1))
                pos = m.end()
                line_had_tokens = True
                continue
            m = _NUMBER_RE.match(raw, pos)
            if m:
                tokens.append(Token(NUMBER, m.group(), lineno, pos + 1))
                pos = m.end()
                line_had_tokens = True
                continue
            if c in _PUNCT:
                if c in "([":
                    depth += 1
                elif c in ")]":
                    depth = max(0, depth - 1)
                tokens.append(Token(OP, c, lineno, pos + 1))
                pos += 1
                line_had_tokens = True
                continue
            raise PsdlSyntaxError(f"unexpected character {c!r}", lineno, pos + 1)

        if depth == 0 and not continued and line_had_tokens:
            tokens.append(Token(NEWLINE, "", lineno, len(raw) + 1))
            line_had_tokens = False

    last_line = len(lines)
    if line_had_tokens:
        tokens.append(Token(NEWLINE, "", last_line, len(lines[-1]) + 1))
    while len(indents) > 1:
        indents.pop()
        tokens.append(Token(DEDENT, "", last_line, 1))
    tokens.append(Token(EOF, "", last_line, len(lines[-1]) + 1))
    return tokens
