"""Reconciling a call site with a replacement signature.

Outcomes form a ladder: clean positional match, match modulo widening casts,
match pending user confirmation, or flat incompatibility. Dropping or
defaulting declared-optional arguments is automatic and does not degrade the
outcome; anything lossy or uncertain needs a human.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .frontend.typetags import CallSiteInfo, UNKNOWN, VOID, Span
from .patterns import InterfaceDescriptor, ReplacementSpec

# The only casts applied without asking: strict widenings.
WIDENING_CASTS = {
    ("f32", "f64"),
    ("i32", "i64"),
    ("u32", "u64"),
    ("i32", "f64"),
}

C_TYPE_NAMES = {
    "f32": "float",
    "f64": "double",
    "i32": "int",
    "i64": "long",
    "u32": "unsigned int",
    "u64": "unsigned long",
}


class BindStatus(enum.IntEnum):
    # Order matters: higher value = worse outcome, and one extra mismatch
    # can only keep or raise the value.
    AUTO_BIND = 0
    AUTO_BIND_WITH_CASTS = 1
    CONFIRMATION_REQUIRED = 2
    INCOMPATIBLE = 3


class ArgUse(enum.Enum):
    USE = "use"
    DROPPED_OPTIONAL = "dropped_optional"
    DEFAULTED_OPTIONAL = "defaulted_optional"


@dataclass(frozen=True)
class ArgMapEntry:
    use: ArgUse
    span: Optional[Span] = None
    text: Optional[str] = None
    cast: Optional[tuple[str, str]] = None  # (from tag, to tag)


@dataclass(frozen=True)
class InterfaceBinding:
    status: BindStatus
    arg_map: tuple[ArgMapEntry, ...]
    notes: tuple[str, ...]

    @property
    def executable(self) -> bool:
        return self.status in (
            BindStatus.AUTO_BIND, BindStatus.AUTO_BIND_WITH_CASTS)


def bind(
    site: CallSiteInfo,
    iface: InterfaceDescriptor,
    replacement: Optional[ReplacementSpec] = None,
) -> InterfaceBinding:
    """Map the site's arguments onto the interface parameters.

    `replacement` is consulted to learn which parameters the snippet actually
    references (surplus declared-optional arguments the snippet ignores are
    dropped silently); binding itself never renders anything.
    """
    used_indices = (
        replacement.referenced_args() if replacement is not None
        else {i for i in range(len(iface.params))}
    )
    params = iface.params
    total = len(params)
    required = iface.required_count
    n = len(site.args)

    status = BindStatus.AUTO_BIND
    notes: list[str] = []
    entries: list[ArgMapEntry] = []

    def worsen(new_status: BindStatus, note: str) -> None:
        nonlocal status
        status = max(status, new_status)
        notes.append(note)

    if n < required:
        worsen(
            BindStatus.CONFIRMATION_REQUIRED,
            f"call passes {n} argument(s) but the replacement requires "
            f"{required}; caller must be changed to supply the missing ones")
    elif n > total:
        worsen(
            BindStatus.CONFIRMATION_REQUIRED,
            f"call passes {n} argument(s) but the replacement accepts at most "
            f"{total}; surplus arguments are not declared optional")

    for k, param in enumerate(params):
        if k < n:
            arg = site.args[k]
            if param.optional and k not in used_indices:
                entries.append(ArgMapEntry(ArgUse.DROPPED_OPTIONAL))
                continue
            if arg.tag == param.type:
                entries.append(ArgMapEntry(ArgUse.USE, arg.span, arg.text))
            elif (arg.tag, param.type) in WIDENING_CASTS:
                entries.append(ArgMapEntry(
                    ArgUse.USE, arg.span, arg.text, cast=(arg.tag, param.type)))
                worsen(
                    BindStatus.AUTO_BIND_WITH_CASTS,
                    f"argument {k} ({arg.text!r}): widening cast "
                    f"{arg.tag} -> {param.type} applied automatically")
            elif arg.tag == UNKNOWN or param.type == UNKNOWN:
                entries.append(ArgMapEntry(ArgUse.USE, arg.span, arg.text))
                worsen(
                    BindStatus.CONFIRMATION_REQUIRED,
                    f"argument {k} ({arg.text!r}): type could not be inferred; "
                    f"replacement expects {param.type}")
            elif (param.type, arg.tag) in WIDENING_CASTS or (
                _numeric(arg.tag) and _numeric(param.type)
            ):
                entries.append(ArgMapEntry(
                    ArgUse.USE, arg.span, arg.text, cast=(arg.tag, param.type)))
                worsen(
                    BindStatus.CONFIRMATION_REQUIRED,
                    f"argument {k} ({arg.text!r}): cast {arg.tag} -> {param.type} "
                    f"may lose information and needs approval")
            else:
                entries.append(ArgMapEntry(ArgUse.USE, arg.span, arg.text))
                worsen(
                    BindStatus.INCOMPATIBLE,
                    f"argument {k} ({arg.text!r}): {arg.tag} cannot be passed "
                    f"as {param.type}")
        else:
            # Trailing parameter the caller did not supply; reachable only
            # when it is optional (otherwise the arity check fired above).
            entries.append(ArgMapEntry(ArgUse.DEFAULTED_OPTIONAL))
            if k in used_indices and param.default is None:
                worsen(
                    BindStatus.CONFIRMATION_REQUIRED,
                    f"replacement needs a value for optional parameter "
                    f"{param.name!r} but no default is registered")

    returns_value = iface.returns != VOID
    if site.return_used != returns_value:
        if site.return_used:
            detail = "the call's result is used but the replacement returns nothing"
        else:
            detail = "the replacement returns a value the original call ignores"
        worsen(BindStatus.CONFIRMATION_REQUIRED, detail)
    elif site.return_used and site.ret_text is None:
        worsen(
            BindStatus.CONFIRMATION_REQUIRED,
            "the call's result feeds a larger expression; the rewrite cannot "
            "place the replacement's return value automatically")

    return InterfaceBinding(status, tuple(entries), tuple(notes))


def _numeric(tag: str) -> bool:
    return tag in C_TYPE_NAMES
