"""Replacement-pattern database.

One JSON document per record, kept under <root>/patterns/. A record ties a
detectable source form (library callee names and/or a reference source file)
to a replacement snippet, the headers and link flags it needs, the backend
profile it runs under, and the call signature used for argument binding.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .frontend.typetags import ALL_TAGS, VOID

KIND_GPU_LIBRARY = "gpu_library"
KIND_FPGA_IP_CORE = "fpga_ip_core"
_RECORD_KINDS = (KIND_GPU_LIBRARY, KIND_FPGA_IP_CORE)

ARG_PLACEHOLDER = re.compile(r"\{\{arg(\d+)\}\}")
RET_PLACEHOLDER = "{{ret}}"


class PatternDbError(Exception):
    pass


class SchemaError(PatternDbError):
    def __init__(self, file: str, detail: str):
        super().__init__(f"{file}: {detail}")
        self.file = file
        self.detail = detail


class DuplicateId(PatternDbError):
    def __init__(self, record_id: str):
        super().__init__(f"duplicate record id {record_id!r}")
        self.record_id = record_id


class DanglingPath(PatternDbError):
    def __init__(self, record_id: str, path: str):
        super().__init__(f"record {record_id!r}: comparison_code {path!r} not found")
        self.record_id = record_id
        self.path = path


@dataclass(frozen=True)
class ParamSpec:
    name: str
    type: str
    optional: bool
    default: Optional[str] = None


@dataclass(frozen=True)
class InterfaceDescriptor:
    params: tuple[ParamSpec, ...]
    returns: str  # type tag or "void"

    @property
    def required_count(self) -> int:
        return sum(1 for p in self.params if not p.optional)


@dataclass(frozen=True)
class ReplacementSpec:
    snippet: str
    includes: tuple[str, ...]
    link_flags: tuple[str, ...]
    backend_profile: str

    def referenced_args(self) -> set[int]:
        return {int(m.group(1)) for m in ARG_PLACEHOLDER.finditer(self.snippet)}

    @property
    def uses_ret(self) -> bool:
        return RET_PLACEHOLDER in self.snippet


@dataclass(frozen=True)
class SourceLibrary:
    callee_names: tuple[str, ...]
    header: Optional[str] = None


@dataclass(frozen=True)
class PatternRecord:
    id: str
    kind: str
    source_library: SourceLibrary
    replacement: ReplacementSpec
    interface: InterfaceDescriptor
    comparison_code: Optional[Path] = None  # resolved against the DB root


def _require(obj: dict, key: str, typ, file: str):
    if key not in obj:
        raise SchemaError(file, f"missing key {key!r}")
    val = obj[key]
    if not isinstance(val, typ):
        raise SchemaError(file, f"key {key!r} has wrong type {type(val).__name__}")
    return val


def _reject_unknown(obj: dict, allowed: set[str], file: str, where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise SchemaError(file, f"unknown key(s) {sorted(unknown)} in {where}")


def _str_list(val, file: str, where: str) -> tuple[str, ...]:
    if not isinstance(val, list) or not all(isinstance(x, str) for x in val):
        raise SchemaError(file, f"{where} must be a list of strings")
    return tuple(val)


def _parse_interface(obj: dict, file: str) -> InterfaceDescriptor:
    _reject_unknown(obj, {"params", "returns"}, file, "interface")
    raw_params = _require(obj, "params", list, file)
    params = []
    for i, p in enumerate(raw_params):
        if not isinstance(p, dict):
            raise SchemaError(file, f"interface.params[{i}] must be an object")
        _reject_unknown(
            p, {"name", "type", "optional", "default"}, file, f"params[{i}]")
        name = _require(p, "name", str, file)
        type_tag = _require(p, "type", str, file)
        if type_tag not in ALL_TAGS:
            raise SchemaError(file, f"params[{i}]: unknown type tag {type_tag!r}")
        optional = _require(p, "optional", bool, file)
        default = p.get("default")
        if default is not None and not isinstance(default, str):
            raise SchemaError(file, f"params[{i}]: default must be a string")
        params.append(ParamSpec(name, type_tag, optional, default))
    returns = _require(obj, "returns", str, file)
    if returns != VOID and returns not in ALL_TAGS:
        raise SchemaError(file, f"unknown returns tag {returns!r}")
    seen_optional = False
    for i, p in enumerate(params):
        if p.optional:
            seen_optional = True
        elif seen_optional:
            raise SchemaError(
                file, f"params[{i}]: required parameter after optional one")
    return InterfaceDescriptor(tuple(params), returns)


def _parse_record(path: Path, root: Path) -> PatternRecord:
    file = str(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(file, f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise SchemaError(file, "top level must be an object")
    _reject_unknown(
        obj,
        {"id", "kind", "source_library", "comparison_code", "replacement",
         "interface"},
        file, "record")
    record_id = _require(obj, "id", str, file)
    kind = _require(obj, "kind", str, file)
    if kind not in _RECORD_KINDS:
        raise SchemaError(file, f"unknown kind {kind!r}")

    src = _require(obj, "source_library", dict, file)
    _reject_unknown(src, {"callee_names", "header"}, file, "source_library")
    callee_names = _str_list(
        src.get("callee_names", []), file, "source_library.callee_names")
    header = src.get("header")
    if header is not None and not isinstance(header, str):
        raise SchemaError(file, "source_library.header must be a string")

    rep = _require(obj, "replacement", dict, file)
    _reject_unknown(
        rep, {"snippet", "includes", "link_flags", "backend_profile"},
        file, "replacement")
    replacement = ReplacementSpec(
        snippet=_require(rep, "snippet", str, file),
        includes=_str_list(rep.get("includes", []), file, "replacement.includes"),
        link_flags=_str_list(
            rep.get("link_flags", []), file, "replacement.link_flags"),
        backend_profile=_require(rep, "backend_profile", str, file),
    )

    interface = _parse_interface(_require(obj, "interface", dict, file), file)

    comparison_code = None
    if "comparison_code" in obj:
        rel = _require(obj, "comparison_code", str, file)
        comparison_code = (root / rel).resolve()
        if not comparison_code.is_file():
            raise DanglingPath(record_id, rel)

    if not callee_names and comparison_code is None:
        raise SchemaError(
            file, "record is undiscoverable: needs callee_names or comparison_code")

    for idx in replacement.referenced_args():
        if idx >= len(interface.params):
            raise SchemaError(
                file, f"snippet references {{{{arg{idx}}}}} but interface has "
                f"only {len(interface.params)} params")
    if replacement.uses_ret and interface.returns == VOID:
        raise SchemaError(file, "snippet uses {{ret}} but interface returns void")

    return PatternRecord(
        id=record_id,
        kind=kind,
        source_library=SourceLibrary(callee_names, header),
        replacement=replacement,
        interface=interface,
        comparison_code=comparison_code,
    )


def load_db(root) -> list[PatternRecord]:
    """Load and validate every record under a DB root; sorted by id."""
    root = Path(root)
    pattern_dir = root / "patterns"
    if not pattern_dir.is_dir():
        pattern_dir = root
    records = []
    seen: set[str] = set()
    for path in sorted(pattern_dir.glob("*.json")):
        record = _parse_record(path, root)
        if record.id in seen:
            raise DuplicateId(record.id)
        seen.add(record.id)
        records.append(record)
    records.sort(key=lambda r: r.id)
    return records


def lookup_by_callee(db: list[PatternRecord], name: str) -> list[PatternRecord]:
    """Records whose registered callee names contain `name`, in id order."""
    return [r for r in db if name in r.source_library.callee_names]
