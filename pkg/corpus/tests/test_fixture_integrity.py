"""Fixture corpus integrity.

Checks the properties the search pipeline relies on, using nothing but a
host C compiler: warning-clean builds, one checksum line per app, checksum
agreement between the naive routines and their optimized stand-ins, and the
frozen standalone speed ratios (fast FFT >= 10x, fast LU >= 3x, slow FFT
genuinely slower).
"""

import math
import re
import shutil
import subprocess
import time
from pathlib import Path

import pytest

CORPUS = Path(__file__).resolve().parent.parent
APPS = CORPUS / "apps"

cc = shutil.which("cc")
pytestmark = pytest.mark.skipif(cc is None, reason="no host C compiler")

CHECKSUM_LINE = re.compile(r"^checksum=([-+0-9.eE]+)\n$")

SUBSTITUTIONS = {
    "fft_fast": ("fft_app.c", "four1(data, nn, isign);",
                 "fastlib_fft(data, nn, isign);", "fastlib.h"),
    "fft_slow": ("fft_app.c", "four1(data, nn, isign);",
                 "slowlib_fft(data, nn, isign);", "slowlib.h"),
    "lu_fast": ("lu_app.c", "ludcmp(a, n);",
                "fastlib_lu(a, n);", "fastlib.h"),
}


def compile_app(src: Path, out: Path, *extra):
    return subprocess.run(
        [cc, "-O2", "-Wall", "-Wextra", str(src), "-o", str(out),
         f"-I{APPS}", "-lm", *extra],
        capture_output=True, text=True)


def substituted_source(key: str, tmp_path: Path) -> Path:
    app, old_call, new_call, header = SUBSTITUTIONS[key]
    text = (APPS / app).read_text()
    assert old_call in text
    text = text.replace(old_call, new_call)
    text = text.replace(
        "#include <math.h>", f'#include <math.h>\n#include "{header}"', 1)
    path = tmp_path / f"{key}.c"
    path.write_text(text)
    return path


def run_once(binary: Path) -> tuple[float, str]:
    started = time.perf_counter()
    proc = subprocess.run([str(binary)], capture_output=True, text=True,
                          timeout=120)
    elapsed = time.perf_counter() - started
    assert proc.returncode == 0, proc.stderr
    return elapsed, proc.stdout


def median_time(binary: Path, runs: int = 3) -> tuple[float, str]:
    times = []
    stdout = ""
    for _ in range(runs):
        elapsed, stdout = run_once(binary)
        times.append(elapsed)
    times.sort()
    return times[(len(times) - 1) // 2], stdout


def checksum_of(stdout: str) -> float:
    match = CHECKSUM_LINE.match(stdout)
    assert match, f"expected a single checksum line, got {stdout!r}"
    return float(match.group(1))


def rel_close(a: float, b: float, tol: float = 1e-6) -> bool:
    return math.isclose(a, b, rel_tol=tol, abs_tol=1e-9)


@pytest.mark.parametrize("name", [
    "fft_app.c", "lu_app.c", "fft_copied.c", "quicksort.c"])
def test_apps_compile_warning_clean(name, tmp_path):
    proc = compile_app(APPS / name, tmp_path / "app.bin")
    assert proc.returncode == 0, proc.stderr
    assert proc.stderr.strip() == "", f"warnings:\n{proc.stderr}"


def test_reference_source_compiles_warning_clean(tmp_path):
    ref = CORPUS / "db" / "refs" / "nr_four1.c"
    proc = subprocess.run(
        [cc, "-O2", "-Wall", "-Wextra", "-c", str(ref),
         "-o", str(tmp_path / "ref.o")],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert proc.stderr.strip() == ""


def test_stand_in_headers_compile_warning_clean(tmp_path):
    driver = tmp_path / "driver.c"
    driver.write_text(
        '#include "fastlib.h"\n'
        '#include "slowlib.h"\n'
        "int main(void)\n"
        "{\n"
        "    double buf[8] = {1, 2, 3, 4, 5, 6, 7, 8};\n"
        "    double mat[4] = {4, 1, 1, 4};\n"
        "    fastlib_fft(buf, 4, 1);\n"
        "    slowlib_fft(buf, 4, -1);\n"
        "    fastlib_lu(mat, 2);\n"
        "    return mat[0] > 0.0 ? 0 : 1;\n"
        "}\n")
    proc = compile_app(driver, tmp_path / "driver.bin")
    assert proc.returncode == 0, proc.stderr
    assert proc.stderr.strip() == ""
    assert subprocess.run([str(tmp_path / "driver.bin")]).returncode == 0


@pytest.mark.parametrize("name", [
    "fft_app.c", "lu_app.c", "fft_copied.c", "quicksort.c"])
def test_each_app_prints_one_checksum_line_and_exits_zero(name, tmp_path):
    binary = tmp_path / "app.bin"
    assert compile_app(APPS / name, binary).returncode == 0
    _, stdout = run_once(binary)
    checksum_of(stdout)  # asserts the exact one-line shape


@pytest.mark.parametrize("key", ["fft_fast", "lu_fast", "fft_slow"])
def test_stand_in_checksums_agree_with_naive(key, tmp_path):
    app = SUBSTITUTIONS[key][0]
    naive_bin = tmp_path / "naive.bin"
    other_bin = tmp_path / "other.bin"
    assert compile_app(APPS / app, naive_bin).returncode == 0
    proc = compile_app(substituted_source(key, tmp_path), other_bin)
    assert proc.returncode == 0, proc.stderr
    assert proc.stderr.strip() == "", f"warnings:\n{proc.stderr}"
    _, naive_out = run_once(naive_bin)
    _, other_out = run_once(other_bin)
    assert rel_close(checksum_of(naive_out), checksum_of(other_out))


def test_fft_standalone_speed_ratio(tmp_path):
    naive_bin = tmp_path / "naive.bin"
    fast_bin = tmp_path / "fast.bin"
    assert compile_app(APPS / "fft_app.c", naive_bin).returncode == 0
    assert compile_app(
        substituted_source("fft_fast", tmp_path), fast_bin).returncode == 0
    naive_t, _ = median_time(naive_bin)
    fast_t, _ = median_time(fast_bin)
    assert naive_t / fast_t >= 10.0, f"only {naive_t / fast_t:.1f}x"


def test_lu_standalone_speed_ratio(tmp_path):
    naive_bin = tmp_path / "naive.bin"
    fast_bin = tmp_path / "fast.bin"
    assert compile_app(APPS / "lu_app.c", naive_bin).returncode == 0
    assert compile_app(
        substituted_source("lu_fast", tmp_path), fast_bin).returncode == 0
    naive_t, _ = median_time(naive_bin)
    fast_t, _ = median_time(fast_bin)
    assert naive_t / fast_t >= 3.0, f"only {naive_t / fast_t:.2f}x"


def test_slow_stand_in_is_actually_slower(tmp_path):
    naive_bin = tmp_path / "naive.bin"
    slow_bin = tmp_path / "slow.bin"
    assert compile_app(APPS / "fft_app.c", naive_bin).returncode == 0
    assert compile_app(
        substituted_source("fft_slow", tmp_path), slow_bin).returncode == 0
    naive_t, _ = median_time(naive_bin)
    slow_t, _ = median_time(slow_bin)
    assert slow_t > naive_t
