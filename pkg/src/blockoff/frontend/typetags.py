"""Lightweight type tags for call arguments.

Just enough typing to reconcile a call site with a replacement signature:
declared types of identifier arguments, literal shapes otherwise, UNKNOWN
whenever inference would have to guess. No real type checking happens here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .nodes import AstNode, NodeKind, SourceUnit, Span

F32 = "f32"
F64 = "f64"
I32 = "i32"
I64 = "i64"
U32 = "u32"
U64 = "u64"
VOID = "void"
UNKNOWN = "unknown"

SCALAR_TAGS = (F32, F64, I32, I64, U32, U64)
ARRAY_TAGS = tuple(t + "_array" for t in SCALAR_TAGS)
ALL_TAGS = SCALAR_TAGS + ARRAY_TAGS + (VOID, UNKNOWN)

_BASE_MAP = {
    "float": F32,
    "double": F64,
    "int": I32,
    "signed int": I32,
    "signed": I32,
    "long": I64,
    "long int": I64,
    "long long": I64,
    "long long int": I64,
    "unsigned": U32,
    "unsigned int": U32,
    "unsigned long": U64,
    "unsigned long int": U64,
    "unsigned long long": U64,
    "unsigned long long int": U64,
    "size_t": U64,
    "int32_t": I32,
    "int64_t": I64,
    "uint32_t": U32,
    "uint64_t": U64,
    "void": VOID,
}
_STRIP_WORDS = frozenset(
    ["const", "volatile", "static", "extern", "register", "inline", "restrict"])


def tag_from_type_text(type_text: Optional[str]) -> str:
    """Map a declared C type spelling onto a tag; UNKNOWN when unsure."""
    if not type_text:
        return UNKNOWN
    words = [w for w in type_text.replace("*", " * ").replace("[]", " [] ").split()
             if w not in _STRIP_WORDS]
    depth = words.count("*") + words.count("[]")
    base = " ".join(w for w in words if w not in ("*", "[]"))
    scalar = _BASE_MAP.get(base, UNKNOWN)
    if depth == 0:
        return scalar
    if depth == 1 and scalar in SCALAR_TAGS:
        return scalar + "_array"
    return UNKNOWN


def array_base(tag: str) -> Optional[str]:
    if tag.endswith("_array"):
        return tag[:-len("_array")]
    return None


def _literal_tag(text: str) -> str:
    if text.startswith(("'",)):
        return I32  # char constants have int type in C
    if text.startswith(('"',)):
        return UNKNOWN
    lowered = text.lower()
    if lowered.startswith("0x"):
        body, suffix = lowered[2:], ""
        while body and body[-1] in "ul":
            suffix += body[-1]
            body = body[:-1]
        is_float = "p" in body
    else:
        body = lowered
        suffix = ""
        while body and body[-1] in "ulf":
            suffix += body[-1]
            body = body[:-1]
        is_float = "." in body or "e" in body
    if is_float or "f" in suffix:
        return F32 if "f" in suffix else F64
    if "u" in suffix and "l" in suffix:
        return U64
    if "u" in suffix:
        return U32
    if "l" in suffix:
        return I64
    return I32


@dataclass(frozen=True)
class ArgInfo:
    span: Span
    text: str
    tag: str


@dataclass(frozen=True)
class CallSiteInfo:
    """What a replacement needs to know about one call site."""

    args: tuple[ArgInfo, ...] = ()
    return_used: bool = False
    ret_span: Optional[Span] = None
    ret_text: Optional[str] = None

    @property
    def arg_tags(self) -> tuple[str, ...]:
        return tuple(a.tag for a in self.args)


def _symbols_in_scope(unit: SourceUnit, enclosing_fn: Optional[AstNode]) -> dict[str, str]:
    table: dict[str, str] = {}
    for child in unit.root.children:
        if child.kind is NodeKind.DECL_STMT:
            for name, type_text in child.declared:
                table[name] = type_text
    if enclosing_fn is not None:
        for node in enclosing_fn.walk():
            if node.kind is NodeKind.PARAM and node.name:
                table[node.name] = node.type_text or ""
            elif node.kind is NodeKind.DECL_STMT:
                for name, type_text in node.declared:
                    table[name] = type_text
    return table


def infer_tag(node: AstNode, table: dict[str, str]) -> str:
    kind = node.kind
    if kind is NodeKind.IDENTIFIER:
        return tag_from_type_text(table.get(node.name or ""))
    if kind is NodeKind.LITERAL:
        return _literal_tag(node.name or "")
    if kind is NodeKind.UNARY_EXPR:
        op = node.name or ""
        if op in ("+", "-") and node.children:
            return infer_tag(node.children[0], table)
        if op == "&" and node.children:
            inner = infer_tag(node.children[0], table)
            if inner in SCALAR_TAGS:
                return inner + "_array"
            return UNKNOWN
        if op == "*" and node.children:
            base = array_base(infer_tag(node.children[0], table))
            return base or UNKNOWN
        if op.startswith("cast:"):
            return tag_from_type_text(op[len("cast:"):])
        return UNKNOWN
    if kind is NodeKind.INDEX_EXPR and node.children:
        base = array_base(infer_tag(node.children[0], table))
        return base or UNKNOWN
    if kind is NodeKind.BINARY_EXPR and len(node.children) == 2:
        left = infer_tag(node.children[0], table)
        right = infer_tag(node.children[1], table)
        if left == right and left in SCALAR_TAGS:
            return left
        return UNKNOWN
    return UNKNOWN


def _parent_map(unit: SourceUnit) -> dict[int, AstNode]:
    parents: dict[int, AstNode] = {}
    for node in unit.root.walk():
        for child in node.children:
            parents[id(child)] = node
    return parents


def enclosing_function(unit: SourceUnit, node: AstNode) -> Optional[AstNode]:
    parents = _parent_map(unit)
    cur = parents.get(id(node))
    while cur is not None:
        if cur.kind is NodeKind.FUNCTION_DEF:
            return cur
        cur = parents.get(id(cur))
    return None


def call_site_info(unit: SourceUnit, call: AstNode) -> CallSiteInfo:
    """Inspect one CallExpr: argument spans/tags and how the result is used."""
    assert call.kind is NodeKind.CALL_EXPR
    table = _symbols_in_scope(unit, enclosing_function(unit, call))
    arglist = next(c for c in call.children if c.kind is NodeKind.ARG_LIST)
    args = tuple(
        ArgInfo(span=a.span, text=unit.slice(a.span), tag=infer_tag(a, table))
        for a in arglist.children
    )
    parents = _parent_map(unit)
    parent = parents.get(id(call))
    if parent is not None and parent.kind is NodeKind.EXPR_STMT:
        return CallSiteInfo(args=args, return_used=False)
    if (
        parent is not None
        and parent.kind is NodeKind.ASSIGN_EXPR
        and parent.name == "="
        and len(parent.children) == 2
        and parent.children[1] is call
    ):
        grand = parents.get(id(parent))
        if grand is not None and grand.kind is NodeKind.EXPR_STMT:
            lhs = parent.children[0]
            return CallSiteInfo(
                args=args, return_used=True,
                ret_span=lhs.span, ret_text=unit.slice(lhs.span))
    return CallSiteInfo(args=args, return_used=True)


def wrapper_site_info(unit: SourceUnit, fn_def: AstNode) -> CallSiteInfo:
    """Treat a function's own parameters as the argument list.

    Used when a cloned definition is rewritten in place (its body becomes a
    forwarding call), so the replacement receives the parameters directly.
    """
    assert fn_def.kind is NodeKind.FUNCTION_DEF
    params = next(c for c in fn_def.children if c.kind is NodeKind.PARAM_LIST)
    args = []
    for p in params.children:
        if not p.name or not p.name_span:
            args.append(ArgInfo(span=p.span, text=unit.slice(p.span), tag=UNKNOWN))
        else:
            args.append(ArgInfo(
                span=p.name_span, text=p.name,
                tag=tag_from_type_text(p.type_text)))
    returns_value = tag_from_type_text(fn_def.type_text) != VOID
    return CallSiteInfo(args=tuple(args), return_used=returns_value)
