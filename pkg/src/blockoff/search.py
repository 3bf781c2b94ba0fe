"""Pattern enumeration and selection: measure, don't assume.

Every candidate is tried alone; the ones that individually beat the all-CPU
baseline are then tried together as a single combination pattern. The winner
is the fastest valid measurement overall, with the baseline always in the
running, so a selection can never be slower than leaving the code alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .detect import OffloadCandidate, overlapping
from .harness import MeasurementResult, Status


class NoValidBaseline(Exception):
    def __init__(self, status: Status):
        super().__init__(
            f"baseline measurement is {status.value}; search refuses to run")
        self.status = status


@dataclass(frozen=True)
class OffloadPattern:
    bits: str  # '1' at position i = candidate i replaced; leftmost is index 0

    @property
    def on_indices(self) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.bits) if b == "1")

    @property
    def on_count(self) -> int:
        return self.bits.count("1")


def single_pattern(index: int, total: int) -> OffloadPattern:
    return OffloadPattern(
        "".join("1" if i == index else "0" for i in range(total)))


def combined_pattern(indices: Sequence[int], total: int) -> OffloadPattern:
    on = set(indices)
    return OffloadPattern(
        "".join("1" if i in on else "0" for i in range(total)))


def baseline_pattern(total: int) -> OffloadPattern:
    return OffloadPattern("0" * total)


@dataclass
class SearchReport:
    baseline: MeasurementResult
    singles: list[MeasurementResult]
    combined: Optional[MeasurementResult]
    selected: OffloadPattern
    speedup: float
    winners: list[int] = field(default_factory=list)
    dropped_from_combination: list[int] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)


MeasureFn = Callable[[OffloadPattern], MeasurementResult]


def search(
    candidates: Sequence[OffloadCandidate],
    baseline: MeasurementResult,
    measure_fn: MeasureFn,
    total_candidates: Optional[int] = None,
) -> SearchReport:
    """Try each candidate alone, then all individual winners together.

    Issues at most len(candidates) + 1 measurements. Ties break toward fewer
    replaced blocks, then toward the lexicographically smaller bit string.
    `total_candidates` sets the bit-string width when some detected
    candidates were excluded before the search (their bits stay 0).
    """
    if baseline.status is not Status.OK:
        raise NoValidBaseline(baseline.status)
    if total_candidates is None:
        total_candidates = max((c.index for c in candidates), default=-1) + 1
    total = total_candidates
    flags: list[str] = []

    singles: list[MeasurementResult] = []
    for cand in candidates:
        singles.append(measure_fn(single_pattern(cand.index, total)))

    winners = [
        cand.index
        for cand, result in zip(candidates, singles)
        if result.status is Status.OK
        and result.median_s is not None
        and result.median_s < baseline.median_s
    ]
    if len(winners) > 2:
        flags.append(
            f"{len(winners)} individual winners; the single all-winners "
            f"combination is an extrapolation of the pairwise policy")

    by_index = {c.index: c for c in candidates}
    kept: list[int] = []
    dropped: list[int] = []
    for idx in winners:
        if any(overlapping(by_index[idx], by_index[k]) for k in kept):
            dropped.append(idx)
        else:
            kept.append(idx)
    if dropped:
        flags.append(
            f"combination dropped overlapping candidate(s) {dropped}")

    combined: Optional[MeasurementResult] = None
    if len(winners) >= 2 and len(kept) >= 2:
        combined = measure_fn(combined_pattern(kept, total))

    pool: list[tuple[MeasurementResult, OffloadPattern]] = [
        (baseline, baseline_pattern(total))]
    for cand, result in zip(candidates, singles):
        if result.status is Status.OK:
            pool.append((result, single_pattern(cand.index, total)))
    if combined is not None and combined.status is Status.OK:
        pool.append((combined, combined_pattern(kept, total)))

    selected_result, selected = min(
        pool, key=lambda rp: (rp[0].median_s, rp[1].on_count, rp[1].bits))
    speedup = (
        baseline.median_s / selected_result.median_s
        if selected_result.median_s else 1.0
    )
    return SearchReport(
        baseline=baseline,
        singles=singles,
        combined=combined,
        selected=selected,
        speedup=speedup,
        winners=winners,
        dropped_from_combination=dropped,
        flags=flags,
    )
