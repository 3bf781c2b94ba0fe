"""blockoff: block-level library substitution tuned by measurement.

Parses C-like sources, finds function blocks that a registered accelerator
library can replace (by callee name or structural similarity), splices each
replacement in, and selects the fastest pattern by compiling, validating,
and timing candidates against the all-CPU baseline.
"""

from .binding import BindStatus, InterfaceBinding, bind
from .detect import (
    DEFAULT_SIGMA,
    OffloadCandidate,
    detect,
    detect_by_name,
    detect_by_similarity,
)
from .frontend import SourceUnit, list_calls, list_definitions, parse
from .harness import (
    BackendProfile,
    MeasurementResult,
    Status,
    StdoutValidator,
    load_profiles,
    measure,
    measure_baseline,
)
from .patterns import PatternRecord, load_db, lookup_by_callee
from .search import OffloadPattern, SearchReport, search
from .similarity import CharacteristicVector, similarity, vectorize
from .transform import apply, render_snippet

__version__ = "0.1.0"

__all__ = [
    "BackendProfile",
    "BindStatus",
    "CharacteristicVector",
    "DEFAULT_SIGMA",
    "InterfaceBinding",
    "MeasurementResult",
    "OffloadCandidate",
    "OffloadPattern",
    "PatternRecord",
    "SearchReport",
    "SourceUnit",
    "Status",
    "StdoutValidator",
    "apply",
    "bind",
    "detect",
    "detect_by_name",
    "detect_by_similarity",
    "list_calls",
    "list_definitions",
    "load_db",
    "load_profiles",
    "lookup_by_callee",
    "measure",
    "measure_baseline",
    "parse",
    "render_snippet",
    "search",
    "similarity",
    "vectorize",
]
