"""Shared test machinery: scripted executor, candidate factory, and a seeded
random-program generator for the structural property tests."""

from __future__ import annotations

import random

from blockoff.binding import BindStatus, InterfaceBinding
from blockoff.detect import OffloadCandidate, Origin, OriginKind, SiteKind
from blockoff.frontend.lexer import tokenize
from blockoff.frontend.parser import BUILTIN_TYPEDEFS, QUALIFIERS, TYPE_KEYWORDS
from blockoff.frontend.typetags import CallSiteInfo
from blockoff.harness import ExecOutcome


class StubExecutor:
    """Returns scripted outcomes in order; records every argv it saw."""

    def __init__(self, outcomes):
        self.outcomes = list(outcomes)
        self.calls = []

    def run(self, argv, *, cwd, env, timeout_s):
        self.calls.append(list(argv))
        if not self.outcomes:
            raise AssertionError("stub executor ran out of scripted outcomes")
        return self.outcomes.pop(0)


def ok(stdout="checksum=1.0\n", seconds=0.1):
    return ExecOutcome(0, stdout, "", seconds)


def fail(returncode=1, stderr="boom", seconds=0.01):
    return ExecOutcome(returncode, "", stderr, seconds)


def make_candidate(index, start=0, end=10, path="app.c", record_id="rec",
                   dead_defs=(), status=BindStatus.AUTO_BIND):
    return OffloadCandidate(
        index=index,
        path=path,
        site=(start, end),
        record_id=record_id,
        origin=Origin(OriginKind.NAME_MATCH),
        binding=InterfaceBinding(status, (), ()),
        site_kind=SiteKind.CALL_STMT,
        site_info=CallSiteInfo(),
        dead_defs=tuple(dead_defs),
    )


# --- random programs in the supported subset --------------------------------

_RESERVED = (
    TYPE_KEYWORDS | QUALIFIERS | BUILTIN_TYPEDEFS
    | {"if", "else", "for", "while", "do", "return", "struct", "union",
       "enum", "typedef", "sizeof", "break", "continue", "goto", "switch",
       "case", "default", "main"}
)


class ProgramGen:
    """Grammar-driven generator covering the parsed statement/expression set."""

    SCALARS = ["int", "long", "unsigned long", "float", "double"]

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.counter = 0

    def fresh(self, prefix="v"):
        self.counter += 1
        return f"{prefix}{self.counter}"

    def literal(self):
        if self.rng.random() < 0.5:
            return str(self.rng.randrange(0, 1000))
        return f"{self.rng.uniform(0.0, 9.0):.3f}"

    def expr(self, names, depth=0):
        r = self.rng.random()
        if depth > 2 or r < 0.25:
            return self.literal()
        if r < 0.5 and names:
            return self.rng.choice(names)
        if r < 0.65:
            op = self.rng.choice(["+", "-", "*", "/", "<", "==", "&&"])
            return (f"({self.expr(names, depth + 1)} {op} "
                    f"{self.expr(names, depth + 1)})")
        if r < 0.75:
            op = self.rng.choice(["-", "!", "~"])
            return f"{op}{self.expr(names, depth + 1)}"
        if r < 0.9:
            callee = self.fresh("fn")
            args = ", ".join(
                self.expr(names, depth + 1)
                for _ in range(self.rng.randrange(0, 3)))
            return f"{callee}({args})"
        if names:
            return f"{self.rng.choice(names)}[{self.expr(names, depth + 1)}]"
        return self.literal()

    def stmt(self, names, depth=0):
        r = self.rng.random()
        ind = "    " * (depth + 1)
        if r < 0.25:
            name = self.fresh()
            names.append(name)
            kind = self.rng.choice(self.SCALARS)
            return f"{ind}{kind} {name} = {self.expr(names)};"
        if r < 0.5 and names:
            return f"{ind}{self.rng.choice(names)} = {self.expr(names)};"
        if r < 0.6:
            return f"{ind}{self.expr(names)};"
        if r < 0.7 and depth < 2:
            inner = self.stmt(list(names), depth)
            return (f"{ind}if ({self.expr(names)})\n{inner}")
        if r < 0.8 and depth < 2:
            i = self.fresh("i")
            body = self.stmt(names + [i], depth + 1)
            return (f"{ind}for (int {i} = 0; {i} < 10; {i} = {i} + 1) "
                    f"{{\n{body}\n{ind}}}")
        if r < 0.9 and depth < 2:
            body = self.stmt(list(names), depth + 1)
            return f"{ind}while ({self.expr(names)}) {{\n{body}\n{ind}}}"
        return f"{ind}return {self.expr(names)};"

    def function(self):
        name = self.fresh("fn")
        params = []
        names = []
        for _ in range(self.rng.randrange(0, 3)):
            p = self.fresh("p")
            names.append(p)
            params.append(f"{self.rng.choice(self.SCALARS)} {p}")
        body = "\n".join(
            self.stmt(names) for _ in range(self.rng.randrange(1, 6)))
        return (f"int {name}({', '.join(params) or 'void'})\n"
                f"{{\n{body}\n}}\n")

    def program(self):
        parts = ["#include <stdio.h>\n"]
        if self.rng.random() < 0.3:
            s = self.fresh("pack")
            parts.append(f"struct {s} {{ int a; double b; }};\n")
        if self.rng.random() < 0.4:
            g = self.fresh("g")
            parts.append(f"double {g} = {self.literal()};\n")
        for _ in range(self.rng.randrange(1, 4)):
            parts.append(self.function())
        return "\n".join(parts)


def scramble(text: str, rng: random.Random) -> str:
    """Rename identifiers, swap literal values, inject comments/whitespace.

    Structure-preserving by construction, so parse trees must keep the same
    kind shape and characteristic vectors must not move.
    """
    toks = tokenize(text)
    mapping: dict[str, str] = {}
    out = []
    last = 0
    for t in toks:
        gap = text[last:t.start]
        if gap and rng.random() < 0.15:
            gap += "/* noise */ "
        if "\n" in gap and rng.random() < 0.1:
            gap += "\n"
        out.append(gap)
        if t.kind == "ident" and t.text not in _RESERVED:
            if t.text not in mapping:
                mapping[t.text] = f"{t.text}_r{len(mapping)}"
            out.append(mapping[t.text])
        elif t.kind == "num":
            if "." in t.text or "e" in t.text.lower():
                out.append(f"{rng.uniform(0.0, 99.0):.4f}")
            else:
                out.append(str(rng.randrange(0, 5000)))
        else:
            out.append(text[t.start:t.end])
        last = t.end
    out.append(text[last:])
    return "".join(out)


def tree_signature(node):
    return (node.kind.name, tuple(tree_signature(c) for c in node.children))
