"""Compile, validate, and time one candidate variant.

The harness reports; it never chooses. Command lines come from backend
profiles (argv templates), so swapping the host compiler for a GPU or HLS
toolchain is a configuration change. Tests inject a scripted executor in
place of subprocess, which makes every status path deterministic.
"""

from __future__ import annotations

import enum
import json
import math
import os
import subprocess
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Protocol, Sequence

DEFAULT_TIMEOUT_S = 60.0
DEFAULT_REPETITIONS = 3
FLOAT_REL_TOL = 1e-6
FLOAT_ABS_TOL = 1e-9


class ProfileError(Exception):
    pass


@dataclass(frozen=True)
class BackendProfile:
    name: str
    compile_cmd: tuple[str, ...]  # argv template: {{src}} {{out}} {{flags}}
    run_cmd: tuple[str, ...]      # argv template: {{bin}}
    env: dict[str, str] = field(default_factory=dict)
    timeout_s: float = DEFAULT_TIMEOUT_S


def load_profiles(path) -> dict[str, BackendProfile]:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ProfileError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ProfileError(f"{path}: top level must be an object")
    profiles = {}
    for name, obj in data.items():
        if not isinstance(obj, dict):
            raise ProfileError(f"{path}: profile {name!r} must be an object")
        unknown = set(obj) - {"compile_cmd", "run_cmd", "env", "timeout_s"}
        if unknown:
            raise ProfileError(
                f"{path}: profile {name!r} has unknown key(s) {sorted(unknown)}")
        compile_cmd = tuple(obj.get("compile_cmd", ()))
        run_cmd = tuple(obj.get("run_cmd", ()))
        if sum(a == "{{src}}" for a in compile_cmd) != 1 \
                or sum(a == "{{out}}" for a in compile_cmd) != 1:
            raise ProfileError(
                f"{path}: profile {name!r}: compile_cmd needs {{{{src}}}} and "
                f"{{{{out}}}} exactly once each")
        if sum(a == "{{bin}}" for a in run_cmd) != 1:
            raise ProfileError(
                f"{path}: profile {name!r}: run_cmd needs {{{{bin}}}} exactly once")
        profiles[name] = BackendProfile(
            name=name,
            compile_cmd=compile_cmd,
            run_cmd=run_cmd,
            env=dict(obj.get("env", {})),
            timeout_s=float(obj.get("timeout_s", DEFAULT_TIMEOUT_S)),
        )
    return profiles


class Status(enum.Enum):
    OK = "ok"
    COMPILE_ERROR = "compile_error"
    RUN_ERROR = "run_error"
    VALIDATION_FAIL = "validation_fail"
    TIMEOUT = "timeout"


@dataclass
class MeasurementResult:
    pattern: str
    status: Status
    times_s: list[float] = field(default_factory=list)
    median_s: Optional[float] = None
    log: str = ""

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern,
            "status": self.status.value,
            "times_s": self.times_s,
            "median_s": self.median_s,
            "log": self.log,
        }


def median_low(times: Sequence[float]) -> float:
    """Median; for even counts the lower middle, so ties stay deterministic."""
    ordered = sorted(times)
    return ordered[(len(ordered) - 1) // 2]


@dataclass(frozen=True)
class ExecOutcome:
    returncode: int
    stdout: str
    stderr: str
    seconds: float
    timed_out: bool = False


class Executor(Protocol):
    def run(self, argv: Sequence[str], *, cwd: Path,
            env: dict[str, str], timeout_s: float) -> ExecOutcome: ...


class SubprocessExecutor:
    """Real executor; wall time is measured around the child process only."""

    def run(self, argv, *, cwd, env, timeout_s):
        started = time.perf_counter()
        try:
            proc = subprocess.run(
                list(argv), cwd=str(cwd), env=env, capture_output=True,
                text=True, timeout=timeout_s)
        except subprocess.TimeoutExpired:
            return ExecOutcome(-1, "", "", time.perf_counter() - started, True)
        except FileNotFoundError:
            return ExecOutcome(
                127, "", f"command not found: {argv[0]}",
                time.perf_counter() - started)
        elapsed = time.perf_counter() - started
        return ExecOutcome(
            proc.returncode, proc.stdout, proc.stderr, elapsed)


class StdoutValidator:
    """Token-wise stdout check with numeric tolerance.

    Whitespace-separated tokens are compared pairwise. Tokens that parse as
    floats match within a relative tolerance; `name=value` tokens compare the
    name exactly and the value numerically; anything else must be identical.
    With no expected text set, the first checked output is captured as the
    reference (match-baseline behavior).
    """

    def __init__(self, expected: Optional[str] = None,
                 rel_tol: float = FLOAT_REL_TOL):
        self.expected = expected
        self.rel_tol = rel_tol

    def check(self, stdout: str) -> tuple[bool, str]:
        if self.expected is None:
            self.expected = stdout
            return True, "captured as reference"
        if self._compare(self.expected, stdout):
            return True, "ok"
        return False, (
            f"output mismatch\n--- expected ---\n{self.expected}"
            f"\n--- actual ---\n{stdout}")

    def _compare(self, expected: str, actual: str) -> bool:
        exp_tokens = expected.split()
        act_tokens = actual.split()
        if len(exp_tokens) != len(act_tokens):
            return False
        return all(self._token_eq(e, a)
                   for e, a in zip(exp_tokens, act_tokens))

    def _token_eq(self, expected: str, actual: str) -> bool:
        num_e, num_a = _to_float(expected), _to_float(actual)
        if num_e is not None and num_a is not None:
            return math.isclose(
                num_e, num_a, rel_tol=self.rel_tol, abs_tol=FLOAT_ABS_TOL)
        if "=" in expected and "=" in actual:
            key_e, _, val_e = expected.partition("=")
            key_a, _, val_a = actual.partition("=")
            if key_e == key_a:
                return self._token_eq(val_e, val_a)
        return expected == actual


def _to_float(token: str) -> Optional[float]:
    try:
        return float(token)
    except ValueError:
        return None


def _expand(template: Sequence[str], mapping: dict[str, Sequence[str]]) -> list[str]:
    argv: list[str] = []
    for element in template:
        if element in mapping:
            argv.extend(mapping[element])
        else:
            argv.append(element)
    return argv


def measure(
    variant_dir,
    profile: BackendProfile,
    validator: StdoutValidator,
    repetitions: int = DEFAULT_REPETITIONS,
    *,
    pattern: str = "",
    extra_flags: Sequence[str] = (),
    executor: Optional[Executor] = None,
) -> MeasurementResult:
    """Compile the variant once, then run and validate it `repetitions` times.

    Runs are strictly sequential; every status other than OK short-circuits.
    """
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    variant_dir = Path(variant_dir).resolve()
    executor = executor or SubprocessExecutor()
    sources = sorted(str(p) for p in variant_dir.glob("*.c"))
    if not sources:
        return MeasurementResult(
            pattern, Status.COMPILE_ERROR, log=f"no .c sources in {variant_dir}")
    binary = str(variant_dir / "app.bin")
    env = dict(os.environ)
    env.update(profile.env)

    compile_argv = _expand(profile.compile_cmd, {
        "{{src}}": sources,
        "{{out}}": [binary],
        "{{flags}}": list(extra_flags),
    })
    outcome = executor.run(
        compile_argv, cwd=variant_dir, env=env, timeout_s=profile.timeout_s)
    if outcome.timed_out:
        return MeasurementResult(
            pattern, Status.COMPILE_ERROR,
            log=f"compile timed out: {' '.join(compile_argv)}")
    if outcome.returncode != 0:
        return MeasurementResult(
            pattern, Status.COMPILE_ERROR,
            log=f"$ {' '.join(compile_argv)}\n{outcome.stderr}")

    run_argv = _expand(profile.run_cmd, {"{{bin}}": [binary]})
    times: list[float] = []
    log_lines = [f"$ {' '.join(compile_argv)}"]
    for i in range(repetitions):
        outcome = executor.run(
            run_argv, cwd=variant_dir, env=env, timeout_s=profile.timeout_s)
        if outcome.timed_out:
            return MeasurementResult(
                pattern, Status.TIMEOUT, times_s=times,
                log=f"run {i + 1} exceeded {profile.timeout_s}s")
        if outcome.returncode != 0:
            return MeasurementResult(
                pattern, Status.RUN_ERROR, times_s=times,
                log=f"run {i + 1} exited {outcome.returncode}\n{outcome.stderr}")
        ok, detail = validator.check(outcome.stdout)
        if not ok:
            return MeasurementResult(
                pattern, Status.VALIDATION_FAIL, times_s=times,
                log=f"run {i + 1}: {detail}")
        times.append(outcome.seconds)
        log_lines.append(f"run {i + 1}: {outcome.seconds:.6f}s")
    return MeasurementResult(
        pattern, Status.OK, times_s=times, median_s=median_low(times),
        log="\n".join(log_lines))


def measure_baseline(
    source_dir,
    profile: BackendProfile,
    validator: StdoutValidator,
    repetitions: int = DEFAULT_REPETITIONS,
    *,
    pattern: str = "",
    extra_flags: Sequence[str] = (),
    executor: Optional[Executor] = None,
) -> MeasurementResult:
    """Measure the unmodified sources.

    With a reference-free validator the first run's stdout becomes the
    reference output that every candidate variant must reproduce.
    """
    return measure(
        source_dir, profile, validator, repetitions,
        pattern=pattern, extra_flags=extra_flags, executor=executor)
