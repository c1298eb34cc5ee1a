"""Tokenizer for the Ghidra-flavored C subset."""

import re
from dataclasses import dataclass

from ..errors import DialectError, ParseError

KEYWORDS = {
    "if", "else", "while", "do", "for", "return", "goto", "break",
    "continue", "sizeof", "switch", "case", "default",
    "void", "char", "short", "int", "long", "signed", "unsigned",
    "const", "volatile", "static", "extern", "struct", "union", "enum",
    "float", "double",
}

# Ghidra typedef vocabulary plus common stdint aliases; all map onto the
# four integer widths of the dialect.
TYPE_NAMES = {
    "void", "char", "short", "int", "long", "signed", "unsigned",
    "undefined", "undefined1", "undefined2", "undefined4", "undefined8",
    "byte", "uchar", "ushort", "uint", "ulong", "code", "bool", "size_t",
    "ssize_t", "int8_t", "int16_t", "int32_t", "int64_t",
    "uint8_t", "uint16_t", "uint32_t", "uint64_t", "intptr_t", "uintptr_t",
    "uuid_t",
}

PUNCT = [
    "<<=", ">>=", "...",
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "+", "-", "*", "/", "%", "&", "|", "^", "~", "!", "<", ">", "=",
    "?", ":", ";", ",", ".", "(", ")", "[", "]", "{", "}",
]


@dataclass
class Token:
    kind: str          # "id", "int", "str", "char", "punct", "kw", "eof"
    text: str
    value: object
    line: int
    col: int

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r})"


_RE_WS = re.compile(r"[ \t\r\n]+")
_RE_LINE_COMMENT = re.compile(r"//[^\n]*")
_RE_BLOCK_COMMENT = re.compile(r"/\*.*?\*/", re.S)
_RE_ID = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_RE_HEX = re.compile(r"0[xX][0-9a-fA-F]+([uUlL]*)")
_RE_FLOAT = re.compile(r"(\d+\.\d*|\.\d+)([eE][+-]?\d+)?[fF]?|\d+[eE][+-]?\d+[fF]?|\d+[fF]\b")
_RE_DEC = re.compile(r"\d+([uUlL]*)")
_RE_STR = re.compile(r'"(\\.|[^"\\])*"')
_RE_CHAR = re.compile(r"'(\\.|[^'\\])'")


def tokenize(src: str) -> list[Token]:
    """Tokenize source text, raising ParseError / DialectError on bad input."""
    toks = []
    i, n = 0, len(src)
    line, linestart = 1, 0
    while i < n:
        m = _RE_WS.match(src, i)
        if m:
            chunk = m.group()
            line += chunk.count("\n")
            if "\n" in chunk:
                linestart = i + chunk.rfind("\n") + 1
            i = m.end()
            continue
        m = _RE_LINE_COMMENT.match(src, i)
        if m:
            i = m.end()
            continue
        m = _RE_BLOCK_COMMENT.match(src, i)
        if m:
            chunk = m.group()
            line += chunk.count("\n")
            if "\n" in chunk:
                linestart = i + chunk.rfind("\n") + 1
            i = m.end()
            continue
        col = i - linestart + 1
        m = _RE_FLOAT.match(src, i)
        if m:
            raise DialectError("floating-point literal", line, col)
        m = _RE_HEX.match(src, i)
        if m:
            body = m.group()
            toks.append(Token("int", body, int(body.rstrip("uUlL"), 16), line, col))
            i = m.end()
            continue
        m = _RE_DEC.match(src, i)
        if m:
            body = m.group()
            toks.append(Token("int", body, int(body.rstrip("uUlL")), line, col))
            i = m.end()
            continue
        m = _RE_ID.match(src, i)
        if m:
            name = m.group()
            kind = "kw" if name in KEYWORDS else "id"
            toks.append(Token(kind, name, name, line, col))
            i = m.end()
            continue
        m = _RE_STR.match(src, i)
        if m:
            toks.append(Token("str", m.group(), _unescape(m.group()[1:-1]), line, col))
            i = m.end()
            continue
        m = _RE_CHAR.match(src, i)
        if m:
            toks.append(Token("char", m.group(), _char_value(m.group()[1:-1]), line, col))
            i = m.end()
            continue
        for p in PUNCT:
            if src.startswith(p, i):
                toks.append(Token("punct", p, p, line, col))
                i += len(p)
                break
        else:
            raise ParseError(f"unknown token {src[i]!r}", line, col)
    toks.append(Token("eof", "", None, line, i - linestart + 1))
    return toks


_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "0": "\0", "\\": "\\",
            "'": "'", '"': '"', "a": "\a", "b": "\b", "f": "\f", "v": "\v"}


def _unescape(body: str) -> str:
    out, i = [], 0
    while i < len(body):
        c = body[i]
        if c == "\\" and i + 1 < len(body):
            out.append(_ESCAPES.get(body[i + 1], body[i + 1]))
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


def _char_value(body: str) -> int:
    return ord(_unescape(body))
