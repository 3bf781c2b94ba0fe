"""Tokenizer for the supported C subset.

Comments and whitespace are skipped entirely (they become gap bytes between
node spans). Preprocessor directives are lexed as single opaque "pp" tokens
covering the whole logical line, so their contents never confuse the parser
or the delimiter balance check.
"""

from __future__ import annotations

from dataclasses import dataclass

PUNCT = (
    ">>=", "<<=", "...",
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "+", "-", "*", "/", "%", "<", ">", "=", "!", "&", "|", "^", "~",
    "?", ":", ";", ",", ".", "(", ")", "[", "]", "{", "}",
)

_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | set("0123456789")
_DIGITS = set("0123456789")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "num" | "str" | "char" | "punct" | "pp" | "eof"
    text: str
    start: int
    end: int


def tokenize(text: str) -> list[Token]:
    toks: list[Token] = []
    i = 0
    n = len(text)
    at_line_start = True
    while i < n:
        ch = text[i]
        if ch in " \t\r\v\f":
            i += 1
            continue
        if ch == "\n":
            i += 1
            at_line_start = True
            continue
        if ch == "/" and i + 1 < n:
            if text[i + 1] == "/":
                j = text.find("\n", i)
                i = n if j < 0 else j
                continue
            if text[i + 1] == "*":
                j = text.find("*/", i + 2)
                i = n if j < 0 else j + 2
                continue
        if ch == "#" and at_line_start:
            j = i
            while j < n:
                k = text.find("\n", j)
                if k < 0:
                    j = n
                    break
                # backslash-newline continues the directive
                if text[k - 1] == "\\" and k > i:
                    j = k + 1
                    continue
                j = k
                break
            toks.append(Token("pp", text[i:j], i, j))
            i = j
            continue
        at_line_start = False
        if ch in _IDENT_START:
            j = i + 1
            while j < n and text[j] in _IDENT_CONT:
                j += 1
            toks.append(Token("ident", text[i:j], i, j))
            i = j
            continue
        if ch in _DIGITS or (ch == "." and i + 1 < n and text[i + 1] in _DIGITS):
            j = i + 1
            while j < n:
                c = text[j]
                if c in _IDENT_CONT or c == ".":
                    j += 1
                elif c in "+-" and text[j - 1] in "eEpP":
                    j += 1
                else:
                    break
            toks.append(Token("num", text[i:j], i, j))
            i = j
            continue
        if ch == '"' or ch == "'":
            quote = ch
            j = i + 1
            while j < n:
                if text[j] == "\\":
                    j += 2
                    continue
                if text[j] == quote:
                    j += 1
                    break
                if text[j] == "\n":
                    break  # unterminated; stop at line end
                j += 1
            kind = "str" if quote == '"' else "char"
            toks.append(Token(kind, text[i:j], i, j))
            i = j
            continue
        for p in PUNCT:
            if text.startswith(p, i):
                toks.append(Token("punct", p, i, i + len(p)))
                i += len(p)
                break
        else:
            # Unknown byte (e.g. stray @): emit as punct so spans stay honest.
            toks.append(Token("punct", ch, i, i + 1))
            i += 1
    toks.append(Token("eof", "", n, n))
    return toks
