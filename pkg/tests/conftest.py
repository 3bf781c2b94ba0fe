import json
from pathlib import Path

import pytest

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
APPS = CORPUS / "apps"
DB_ROOT = CORPUS / "db"
DB_SLOW_ROOT = CORPUS / "db_slow"
PROFILES = CORPUS / "profiles.json"

APP_FILES = ["fft_app.c", "lu_app.c", "fft_copied.c", "quicksort.c"]


@pytest.fixture(scope="session")
def corpus_units():
    from blockoff.frontend import parse

    return {
        name: parse(str(APPS / name), (APPS / name).read_bytes())
        for name in APP_FILES
    }


@pytest.fixture(scope="session")
def fixture_db():
    from blockoff.patterns import load_db

    return load_db(DB_ROOT)


def write_record(root: Path, record: dict) -> Path:
    """Drop one record JSON into <root>/patterns/."""
    patterns = root / "patterns"
    patterns.mkdir(parents=True, exist_ok=True)
    path = patterns / f"{record['id']}.json"
    path.write_text(json.dumps(record, indent=2), encoding="utf-8")
    return path


def basic_record(
    record_id="fastmath",
    callees=("slow_op",),
    snippet="fast_op({{arg0}});",
    params=None,
    returns="void",
    includes=("fast.h",),
    comparison_code=None,
    backend_profile="accel_cpu_standin",
) -> dict:
    if params is None:
        params = [{"name": "x", "type": "f64_array", "optional": False}]
    record = {
        "id": record_id,
        "kind": "gpu_library",
        "source_library": {"callee_names": list(callees)},
        "replacement": {
            "snippet": snippet,
            "includes": list(includes),
            "link_flags": [],
            "backend_profile": backend_profile,
        },
        "interface": {"params": params, "returns": returns},
    }
    if comparison_code is not None:
        record["comparison_code"] = comparison_code
    return record
