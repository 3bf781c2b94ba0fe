"""Structural similarity through node-kind count vectors.

A subtree is summarized as a fixed-length vector counting how many nodes of
each kind it contains. Renaming identifiers, changing literals, or editing
comments leaves the vector untouched, which is exactly what makes
copied-then-tweaked code detectable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .frontend import AstNode, KIND_COUNT

# Definitions smaller than this never enter similarity matching; tiny bodies
# look alike for no interesting reason.
MIN_TOKEN_MASS = 20


@dataclass(frozen=True)
class CharacteristicVector:
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.counts) != KIND_COUNT:
            raise ValueError(
                f"expected {KIND_COUNT} slots, got {len(self.counts)}")
        if any(c < 0 for c in self.counts):
            raise ValueError("negative count")

    @property
    def token_mass(self) -> int:
        return sum(self.counts)


def vectorize(node: AstNode) -> CharacteristicVector:
    """Count descendants-or-self per node kind."""
    counts = [0] * KIND_COUNT
    for n in node.walk():
        counts[int(n.kind)] += 1
    return CharacteristicVector(tuple(counts))


def similarity(u: CharacteristicVector, v: CharacteristicVector) -> float:
    """Size-normalized closeness in [0, 1]; 1 means identical vectors.

    Defined as 1 - |u - v| / (|u| + |v|) with Euclidean norms. Two empty
    vectors count as identical.
    """
    if len(u.counts) != len(v.counts):
        raise ValueError("vector length mismatch")
    dist_sq = 0
    norm_u_sq = 0
    norm_v_sq = 0
    for a, b in zip(u.counts, v.counts):
        dist_sq += (a - b) * (a - b)
        norm_u_sq += a * a
        norm_v_sq += b * b
    denom = math.sqrt(norm_u_sq) + math.sqrt(norm_v_sq)
    if denom == 0.0:
        return 1.0
    return 1.0 - math.sqrt(dist_sq) / denom
