"""Span-preserving frontend for C-like sources."""

from .nodes import (
    AstNode,
    Definition,
    KIND_COUNT,
    NodeKind,
    SourceError,
    SourceUnit,
    Span,
    UnbalancedDelimiters,
    check_spans,
)
from .parser import list_calls, list_definitions, parse
from .typetags import (
    ArgInfo,
    CallSiteInfo,
    SCALAR_TAGS,
    UNKNOWN,
    VOID,
    call_site_info,
    enclosing_function,
    infer_tag,
    tag_from_type_text,
    wrapper_site_info,
)

__all__ = [
    "AstNode",
    "ArgInfo",
    "CallSiteInfo",
    "Definition",
    "KIND_COUNT",
    "NodeKind",
    "SCALAR_TAGS",
    "SourceError",
    "SourceUnit",
    "Span",
    "UNKNOWN",
    "UnbalancedDelimiters",
    "VOID",
    "call_site_info",
    "check_spans",
    "enclosing_function",
    "infer_tag",
    "list_calls",
    "list_definitions",
    "parse",
    "tag_from_type_text",
    "wrapper_site_info",
]
