"""Splicing replacement snippets into source text.

Edits are byte-range substitutions applied in descending start order so that
earlier offsets stay valid without re-parsing. Everything outside an edited
span is copied through untouched.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .binding import ArgUse, C_TYPE_NAMES, InterfaceBinding
from .detect import OffloadCandidate, SiteKind
from .frontend import NodeKind, SourceUnit, Span
from .frontend.typetags import CallSiteInfo
from .patterns import ARG_PLACEHOLDER, PatternRecord, RET_PLACEHOLDER

REMOVED_MARKER = "/* blockoff: removed {id} */"


class TransformError(Exception):
    pass


class UnboundPlaceholder(TransformError):
    def __init__(self, index):
        super().__init__(f"snippet references unbound placeholder {index!r}")
        self.index = index


class OverlapError(TransformError):
    def __init__(self, first: int, second: int):
        super().__init__(
            f"candidates {first} and {second} edit overlapping spans")
        self.first = first
        self.second = second


@dataclass(frozen=True)
class Edit:
    span: Span
    text: str
    owner: Optional[int] = None  # candidate index, for error reporting


@dataclass(frozen=True)
class SpliceSet:
    edits: tuple[Edit, ...]

    def __post_init__(self):
        ordered = sorted(self.edits, key=lambda e: e.span)
        for a, b in zip(ordered, ordered[1:]):
            if _spans_overlap(a.span, b.span):
                raise OverlapError(
                    a.owner if a.owner is not None else -1,
                    b.owner if b.owner is not None else -1)

    def apply(self, text: str) -> str:
        for edit in sorted(self.edits, key=lambda e: e.span, reverse=True):
            start, end = edit.span
            text = text[:start] + edit.text + text[end:]
        return text


def _spans_overlap(a: Span, b: Span) -> bool:
    if a[0] == a[1] or b[0] == b[1]:  # pure insertions collide only if equal
        return False
    return a[0] < b[1] and b[0] < a[1]


def render_snippet(
    record: PatternRecord,
    binding: InterfaceBinding,
    site: CallSiteInfo,
) -> str:
    """Substitute {{argN}} / {{ret}} placeholders with bound expressions."""

    def render_arg(match: re.Match) -> str:
        idx = int(match.group(1))
        if idx >= len(binding.arg_map):
            raise UnboundPlaceholder(idx)
        entry = binding.arg_map[idx]
        if entry.use is ArgUse.DEFAULTED_OPTIONAL:
            default = record.interface.params[idx].default
            if default is None:
                raise UnboundPlaceholder(idx)
            return default
        if entry.use is ArgUse.DROPPED_OPTIONAL or entry.text is None:
            raise UnboundPlaceholder(idx)
        if entry.cast is not None:
            return f"({C_TYPE_NAMES[entry.cast[1]]})({entry.text})"
        return entry.text

    out = ARG_PLACEHOLDER.sub(render_arg, record.replacement.snippet)
    if RET_PLACEHOLDER in out:
        if site.ret_text is None:
            raise UnboundPlaceholder("ret")
        out = out.replace(RET_PLACEHOLDER, site.ret_text)
    return out


_INCLUDE_RE = r'#\s*include\s*[<"]{name}[">]'


def _include_insertion_offset(unit: SourceUnit) -> int:
    """Offset just after the last include in the file's leading directives."""
    offset = 0
    for child in unit.root.children:
        if child.kind is not NodeKind.OPAQUE_STMT:
            break
        text = unit.slice(child.span).lstrip()
        if not text.startswith("#"):
            break
        if text.startswith("#include") or text.startswith("# include"):
            nl = unit.text.find("\n", child.end)
            offset = (nl + 1) if nl >= 0 else len(unit.text)
    return offset


def build_splices(
    unit: SourceUnit,
    selected: list[OffloadCandidate],
    db_by_id: dict[str, PatternRecord],
) -> SpliceSet:
    edits: list[Edit] = []
    includes_needed: list[str] = []
    for cand in selected:
        record = db_by_id[cand.record_id]
        body = render_snippet(record, cand.binding, cand.site_info)
        if cand.site_kind is SiteKind.BODY:
            body = "{ " + body + " }"
        edits.append(Edit(cand.site, body, cand.index))
        for span in cand.dead_defs:
            edits.append(Edit(
                span, REMOVED_MARKER.format(id=record.id), cand.index))
        for header in record.replacement.includes:
            if header not in includes_needed:
                includes_needed.append(header)

    missing = [
        h for h in includes_needed
        if not re.search(_INCLUDE_RE.format(name=re.escape(h)), unit.text)
    ]
    if missing:
        at = _include_insertion_offset(unit)
        text = "".join(f'#include "{h}"\n' for h in missing)
        edits.append(Edit((at, at), text))
    return SpliceSet(tuple(edits))


def apply(
    unit: SourceUnit,
    selected: list[OffloadCandidate],
    db_by_id: dict[str, PatternRecord],
) -> str:
    """Produce the unit's text with every selected candidate spliced in.

    An empty selection returns the input text unchanged, byte for byte.
    """
    if not selected:
        return unit.text
    return build_splices(unit, selected, db_by_id).apply(unit.text)
