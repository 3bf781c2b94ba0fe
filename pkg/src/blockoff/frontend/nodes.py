"""Syntax tree with exact source spans.

Every node keeps a half-open [start, end) offset range into the text of the
unit it was parsed from, so edits can be spliced back without reformatting
anything. Bytes not covered by a child node (whitespace, comments, stray
punctuation) are "gap bytes" owned by the enclosing node.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterator, Optional


class NodeKind(IntEnum):
    """Closed list of node kinds.

    The order is load-bearing: it is also the slot order of characteristic
    vectors, so it must never be reordered or extended casually.
    """

    TRANSLATION_UNIT = 0
    FUNCTION_DEF = 1
    STRUCT_DEF = 2
    TYPEDEF = 3
    PARAM_LIST = 4
    PARAM = 5
    COMPOUND_STMT = 6
    DECL_STMT = 7
    EXPR_STMT = 8
    IF_STMT = 9
    FOR_STMT = 10
    WHILE_STMT = 11
    DO_STMT = 12
    RETURN_STMT = 13
    OPAQUE_STMT = 14
    CALL_EXPR = 15
    ARG_LIST = 16
    BINARY_EXPR = 17
    UNARY_EXPR = 18
    ASSIGN_EXPR = 19
    INDEX_EXPR = 20
    MEMBER_EXPR = 21
    IDENTIFIER = 22
    LITERAL = 23


KIND_COUNT = len(NodeKind)

Span = tuple[int, int]


@dataclass
class AstNode:
    kind: NodeKind
    start: int
    end: int
    children: list["AstNode"] = field(default_factory=list)
    name: Optional[str] = None
    # Declaration metadata used by the lightweight type inference. Only
    # meaningful on PARAM / DECL_STMT / FUNCTION_DEF nodes.
    type_text: Optional[str] = None
    declared: tuple[tuple[str, str], ...] = ()  # (name, type text) pairs
    name_span: Optional[Span] = None

    @property
    def span(self) -> Span:
        return (self.start, self.end)

    def walk(self) -> Iterator["AstNode"]:
        """Preorder traversal (document order)."""
        yield self
        for child in self.children:
            yield from child.walk()

    def find(self, kind: NodeKind) -> Iterator["AstNode"]:
        return (n for n in self.walk() if n.kind is kind)

    def __repr__(self) -> str:  # compact, for test failures
        name = f" {self.name!r}" if self.name else ""
        return f"<{self.kind.name}{name} [{self.start}:{self.end}) {len(self.children)} kids>"


@dataclass
class SourceUnit:
    path: str
    text: str
    root: AstNode

    def slice(self, span: Span) -> str:
        return self.text[span[0]:span[1]]

    def line_col(self, offset: int) -> tuple[int, int]:
        """1-based (line, column) of a character offset."""
        line = self.text.count("\n", 0, offset) + 1
        nl = self.text.rfind("\n", 0, offset)
        return line, offset - nl


@dataclass(frozen=True)
class Definition:
    kind: NodeKind  # FUNCTION_DEF or STRUCT_DEF
    name: str
    node: AstNode


class SourceError(Exception):
    """Base for frontend failures."""


class UnbalancedDelimiters(SourceError):
    """Unmatched brace/paren/bracket; parsing refuses to guess."""

    def __init__(self, path: str, line: int, col: int, detail: str):
        super().__init__(f"{path}:{line}:{col}: {detail}")
        self.path = path
        self.line = line
        self.col = col
        self.detail = detail


def check_spans(node: AstNode) -> None:
    """Assert the span invariants over a whole tree (test helper).

    Children must be ordered, pairwise non-overlapping and contained in the
    parent span. Raises AssertionError on the first violation.
    """
    for n in node.walk():
        prev_end = n.start
        for child in n.children:
            assert n.start <= child.start <= child.end <= n.end, (
                f"child {child!r} escapes parent {n!r}")
            assert child.start >= prev_end, (
                f"child {child!r} overlaps sibling in {n!r}")
            prev_end = child.end
