"""End-to-end orchestration used by the command-line interface.

Keeps the moving parts honest: parse everything up front, detect and bind,
settle confirmations, then hand a variant-building measure function to the
search. All filesystem layout decisions (variant directories, report
location) live here.
"""

from __future__ import annotations

import dataclasses
import enum
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import transform
from .binding import BindStatus
from .detect import (
    DEFAULT_SIGMA,
    DetectionWarning,
    OffloadCandidate,
    detect,
    overlapping,
)
from .frontend import SourceUnit, parse
from .harness import (
    BackendProfile,
    DEFAULT_REPETITIONS,
    Executor,
    MeasurementResult,
    Status,
    StdoutValidator,
    load_profiles,
    measure,
)
from .patterns import PatternRecord, load_db
from .search import OffloadPattern, SearchReport, baseline_pattern, search

BASELINE_PROFILE = "cpu_baseline"
REPORT_NAME = "report.json"


class ConfirmMode(enum.Enum):
    INTERACTIVE = "interactive"
    ASSUME_YES = "assume_yes"
    ASSUME_NO = "assume_no"


@dataclass
class RunConfig:
    sources: list[Path]
    db_root: Path
    profiles_path: Optional[Path] = None
    sigma: float = DEFAULT_SIGMA
    repetitions: int = DEFAULT_REPETITIONS
    confirm_mode: ConfirmMode = ConfirmMode.INTERACTIVE
    out_dir: Path = Path("out")
    baseline_profile: str = BASELINE_PROFILE

    def __post_init__(self):
        if not 0.0 <= self.sigma <= 1.0:
            raise ValueError("sigma must be in [0, 1]")
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")


@dataclass
class Detection:
    units: list[SourceUnit]
    candidates: list[OffloadCandidate]
    warnings: list[DetectionWarning]
    db: list[PatternRecord]

    @property
    def db_by_id(self) -> dict[str, PatternRecord]:
        return {r.id: r for r in self.db}


def run_detect(config: RunConfig) -> Detection:
    """Parse all sources, load the DB, and list candidates in global order."""
    db = load_db(config.db_root)
    units = [parse(str(p), Path(p).read_bytes()) for p in config.sources]
    warnings: list[DetectionWarning] = []
    candidates: list[OffloadCandidate] = []
    for unit in units:
        for cand in detect(unit, db, config.sigma, warnings):
            candidates.append(
                dataclasses.replace(cand, index=len(candidates)))
    for i, a in enumerate(candidates):
        for b in candidates[i + 1:]:
            if overlapping(a, b):
                warnings.append(DetectionWarning(
                    a.record_id,
                    f"candidates {a.index} and {b.index} overlap and cannot "
                    f"be selected together"))
    return Detection(units, candidates, warnings, db)


ConfirmFn = Callable[[OffloadCandidate], bool]


@dataclass
class Resolution:
    eligible: list[OffloadCandidate]
    excluded: dict[int, str]  # candidate index -> reason
    confirmations: list[tuple[int, bool]]


def resolve_confirmations(
    candidates: Sequence[OffloadCandidate], confirm_fn: ConfirmFn
) -> Resolution:
    eligible = []
    excluded: dict[int, str] = {}
    confirmations: list[tuple[int, bool]] = []
    for cand in candidates:
        if cand.binding.status is BindStatus.INCOMPATIBLE:
            excluded[cand.index] = "incompatible interface"
        elif cand.binding.status is BindStatus.CONFIRMATION_REQUIRED:
            approved = confirm_fn(cand)
            confirmations.append((cand.index, approved))
            if approved:
                eligible.append(cand)
            else:
                excluded[cand.index] = "interface change declined"
        else:
            eligible.append(cand)
    return Resolution(eligible, excluded, confirmations)


class VariantBuilder:
    """Materializes one source tree per pattern under the output root."""

    def __init__(self, detection: Detection, out_dir: Path):
        self.detection = detection
        self.out_dir = Path(out_dir)
        names = [Path(u.path).name for u in detection.units]
        if len(set(names)) != len(names):
            raise ValueError("source files must have distinct names")

    def build(self, pattern: OffloadPattern) -> Path:
        variant_dir = self.out_dir / (pattern.bits or "baseline")
        variant_dir.mkdir(parents=True, exist_ok=True)
        on = set(pattern.on_indices)
        db_by_id = self.detection.db_by_id
        for unit in self.detection.units:
            mine = [c for c in self.detection.candidates
                    if c.index in on and c.path == unit.path]
            text = transform.apply(unit, mine, db_by_id)
            (variant_dir / Path(unit.path).name).write_text(text, encoding="utf-8")
        return variant_dir


class PatternMeasurer:
    """Builds a variant for a pattern and times it under the right profile."""

    def __init__(
        self,
        detection: Detection,
        builder: VariantBuilder,
        profiles: dict[str, BackendProfile],
        config: RunConfig,
        executor: Optional[Executor] = None,
    ):
        self.detection = detection
        self.builder = builder
        self.profiles = profiles
        self.config = config
        self.executor = executor
        self.validator = StdoutValidator()
        # Quoted includes must resolve as if each file were still in place.
        self.include_flags = sorted({
            f"-I{Path(u.path).resolve().parent}" for u in detection.units})

    def _profile_for(self, pattern: OffloadPattern) -> BackendProfile:
        on = pattern.on_indices
        if not on:
            return self.profiles[self.config.baseline_profile]
        by_index = {c.index: c for c in self.detection.candidates}
        db = self.detection.db_by_id
        names = []
        for idx in on:
            profile = db[by_index[idx].record_id].replacement.backend_profile
            if profile not in names:
                names.append(profile)
        return self.profiles[names[0]]

    def _flags_for(self, pattern: OffloadPattern) -> list[str]:
        flags = list(self.include_flags)
        by_index = {c.index: c for c in self.detection.candidates}
        db = self.detection.db_by_id
        for idx in pattern.on_indices:
            for flag in db[by_index[idx].record_id].replacement.link_flags:
                if flag not in flags:
                    flags.append(flag)
        return flags

    def __call__(self, pattern: OffloadPattern) -> MeasurementResult:
        variant_dir = self.builder.build(pattern)
        return measure(
            variant_dir,
            self._profile_for(pattern),
            self.validator,
            self.config.repetitions,
            pattern=pattern.bits,
            extra_flags=self._flags_for(pattern),
            executor=self.executor,
        )


@dataclass
class SearchOutcome:
    detection: Detection
    resolution: Resolution
    baseline: MeasurementResult
    report: Optional[SearchReport]  # None when the baseline failed
    report_path: Optional[Path]


def candidate_rows(detection: Detection) -> list[dict]:
    units = {u.path: u for u in detection.units}
    rows = []
    for cand in detection.candidates:
        line, _ = units[cand.path].line_col(cand.site[0])
        rows.append({
            "index": cand.index,
            "file": cand.path,
            "line": line,
            "record": cand.record_id,
            "origin": cand.origin.kind.value,
            "score": cand.origin.score,
            "binding_status": cand.binding.status.name,
            "binding_notes": list(cand.binding.notes),
        })
    return rows


def _report_dict(
    config: RunConfig,
    detection: Detection,
    resolution: Resolution,
    report: SearchReport,
) -> dict:
    return {
        "sources": [str(p) for p in config.sources],
        "db_root": str(config.db_root),
        "sigma": config.sigma,
        "repetitions": config.repetitions,
        "candidates": candidate_rows(detection),
        "excluded": {str(k): v for k, v in sorted(resolution.excluded.items())},
        "confirmations": [
            {"index": idx, "approved": ok}
            for idx, ok in resolution.confirmations
        ],
        "warnings": [
            {"record": w.record_id, "message": w.message}
            for w in detection.warnings
        ],
        "baseline": report.baseline.to_dict(),
        "singles": [r.to_dict() for r in report.singles],
        "combined": report.combined.to_dict() if report.combined else None,
        "selected": report.selected.bits,
        "speedup": report.speedup,
        "winners": report.winners,
        "dropped_from_combination": report.dropped_from_combination,
        "flags": report.flags,
    }


def write_report(path: Path, payload: dict) -> None:
    """Write-then-rename so a crash never leaves a half-written report."""
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    os.replace(tmp, path)


def run_search(
    config: RunConfig,
    confirm_fn: ConfirmFn,
    executor: Optional[Executor] = None,
) -> SearchOutcome:
    """Full pipeline; the caller maps the outcome onto exit codes."""
    detection = run_detect(config)
    profiles = load_profiles(config.profiles_path)
    if config.baseline_profile not in profiles:
        raise ValueError(
            f"profiles file lacks baseline profile {config.baseline_profile!r}")
    for record in detection.db:
        if record.replacement.backend_profile not in profiles:
            raise ValueError(
                f"record {record.id!r} names unknown backend profile "
                f"{record.replacement.backend_profile!r}")

    resolution = resolve_confirmations(detection.candidates, confirm_fn)
    builder = VariantBuilder(detection, config.out_dir)
    measurer = PatternMeasurer(detection, builder, profiles, config, executor)

    total = len(detection.candidates)
    baseline = measurer(baseline_pattern(total))
    if baseline.status is not Status.OK:
        return SearchOutcome(detection, resolution, baseline, None, None)

    report = search(
        resolution.eligible, baseline, measurer, total_candidates=total)
    payload = _report_dict(config, detection, resolution, report)
    report_path = Path(config.out_dir) / REPORT_NAME
    write_report(report_path, payload)
    return SearchOutcome(detection, resolution, baseline, report, report_path)
