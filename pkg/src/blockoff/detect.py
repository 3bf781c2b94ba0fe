"""Candidate discovery: which blocks of a unit could be replaced.

Two routes feed the candidate list. Name matching pairs registered callee
names with call expressions. Similarity matching compares function bodies
against reference sources registered in the DB and fires above a score
threshold, which catches code that was copied and then renamed or
re-commented.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Optional

from .binding import InterfaceBinding, bind
from .frontend import (
    AstNode,
    NodeKind,
    SourceUnit,
    Span,
    call_site_info,
    list_calls,
    parse,
    wrapper_site_info,
)
from .frontend.typetags import CallSiteInfo
from .patterns import PatternRecord, lookup_by_callee
from .similarity import MIN_TOKEN_MASS, similarity, vectorize

DEFAULT_SIGMA = 0.9


class SiteKind(enum.Enum):
    CALL_STMT = "call_stmt"  # a whole `f(...);` statement
    CALL_EXPR = "call_expr"  # a call embedded in a larger expression
    BODY = "body"            # a cloned definition's body, rewritten in place


class OriginKind(enum.Enum):
    NAME_MATCH = "name"
    SIMILARITY_MATCH = "similarity"


@dataclass(frozen=True)
class Origin:
    kind: OriginKind
    score: Optional[float] = None  # similarity score in [0, 1]

    def describe(self) -> str:
        if self.kind is OriginKind.NAME_MATCH:
            return "name"
        return f"similarity({self.score:.3f})"


@dataclass(frozen=True)
class OffloadCandidate:
    index: int
    path: str
    site: Span
    record_id: str
    origin: Origin
    binding: InterfaceBinding
    site_kind: SiteKind
    site_info: CallSiteInfo
    dead_defs: tuple[Span, ...] = ()


@dataclass(frozen=True)
class DetectionWarning:
    record_id: str
    message: str


def _statement_site(unit: SourceUnit, call: AstNode) -> tuple[Span, SiteKind]:
    """Full statement span for standalone calls, else the call span."""
    parents: dict[int, AstNode] = {}
    for node in unit.root.walk():
        for child in node.children:
            parents[id(child)] = node
    parent = parents.get(id(call))
    if parent is not None and parent.kind is NodeKind.EXPR_STMT:
        if len(parent.children) == 1:
            return parent.span, SiteKind.CALL_STMT
    # `x = f(...);` rewrites the whole statement so the result has a home.
    if (
        parent is not None
        and parent.kind is NodeKind.ASSIGN_EXPR
        and parent.children
        and parent.children[-1] is call
    ):
        grand = parents.get(id(parent))
        if grand is not None and grand.kind is NodeKind.EXPR_STMT:
            return grand.span, SiteKind.CALL_STMT
    return call.span, SiteKind.CALL_EXPR


def detect_by_name(
    unit: SourceUnit, db: list[PatternRecord]
) -> list[OffloadCandidate]:
    """One candidate per (registered call site, matching record)."""
    found = []
    for callee, call in list_calls(unit):
        if not callee:
            continue
        for record in lookup_by_callee(db, callee):
            site, site_kind = _statement_site(unit, call)
            info = call_site_info(unit, call)
            found.append(OffloadCandidate(
                index=0,
                path=unit.path,
                site=site,
                record_id=record.id,
                origin=Origin(OriginKind.NAME_MATCH),
                binding=bind(info, record.interface, record.replacement),
                site_kind=site_kind,
                site_info=info,
            ))
    return _reindex(found)


def _reference_vectors(record: PatternRecord):
    ref_unit = parse(str(record.comparison_code),
                     record.comparison_code.read_bytes())
    vectors = []
    for node in ref_unit.root.walk():
        if node.kind is NodeKind.FUNCTION_DEF:
            body = node.children[-1]
            vectors.append(vectorize(body))
    return vectors


def detect_by_similarity(
    unit: SourceUnit,
    db: list[PatternRecord],
    threshold: float = DEFAULT_SIGMA,
    warnings: Optional[list[DetectionWarning]] = None,
) -> list[OffloadCandidate]:
    """Candidates for definitions structurally close to registered references.

    A clone called exactly once is replaced at its call site and the dead
    definition is scheduled for deletion; any other clone keeps its signature
    and has its body rewritten into a forwarding call.
    """
    refs: list[tuple[PatternRecord, list]] = []
    for record in db:
        if record.comparison_code is None:
            continue
        try:
            vectors = _reference_vectors(record)
        except Exception as exc:  # reference outside the supported subset
            if warnings is not None:
                warnings.append(DetectionWarning(
                    record.id, f"reference source failed to parse: {exc}"))
            continue
        if vectors:
            refs.append((record, vectors))
    if not refs:
        return []

    calls_by_name: dict[str, list[AstNode]] = {}
    for callee, call in list_calls(unit):
        if callee:
            calls_by_name.setdefault(callee, []).append(call)

    found = []
    for fn in unit.root.walk():
        if fn.kind is not NodeKind.FUNCTION_DEF:
            continue
        body = fn.children[-1]
        if body.kind is not NodeKind.COMPOUND_STMT:
            continue
        vec = vectorize(body)
        if vec.token_mass < MIN_TOKEN_MASS:
            continue
        for record, ref_vectors in refs:
            score = max(similarity(vec, rv) for rv in ref_vectors)
            if score < threshold:
                continue
            call_sites = calls_by_name.get(fn.name or "", [])
            if len(call_sites) == 1:
                call = call_sites[0]
                site, site_kind = _statement_site(unit, call)
                info = call_site_info(unit, call)
                dead_defs: tuple[Span, ...] = (fn.span,)
            else:
                site, site_kind = fn.children[-1].span, SiteKind.BODY
                info = wrapper_site_info(unit, fn)
                dead_defs = ()
            found.append(OffloadCandidate(
                index=0,
                path=unit.path,
                site=site,
                record_id=record.id,
                origin=Origin(OriginKind.SIMILARITY_MATCH, score),
                binding=bind(info, record.interface, record.replacement),
                site_kind=site_kind,
                site_info=info,
                dead_defs=dead_defs,
            ))
    return _reindex(found)


def detect(
    unit: SourceUnit,
    db: list[PatternRecord],
    threshold: float = DEFAULT_SIGMA,
    warnings: Optional[list[DetectionWarning]] = None,
) -> list[OffloadCandidate]:
    """Both detection routes merged, indexed in document order."""
    merged = list(detect_by_name(unit, db))
    merged.extend(detect_by_similarity(unit, db, threshold, warnings))
    return _reindex(merged)


def _reindex(candidates: list[OffloadCandidate]) -> list[OffloadCandidate]:
    ordered = sorted(
        candidates,
        key=lambda c: (c.site[0], c.record_id, c.origin.kind.value, c.site[1]))
    return [replace(c, index=i) for i, c in enumerate(ordered)]


def overlapping(a: OffloadCandidate, b: OffloadCandidate) -> bool:
    """Whether two candidates' edits collide and cannot be co-selected."""
    if a.path != b.path:
        return False
    spans_a = (a.site,) + a.dead_defs
    spans_b = (b.site,) + b.dead_defs
    for sa in spans_a:
        for sb in spans_b:
            if sa[0] < sb[1] and sb[0] < sa[1]:
                return True
    return False
