"""Command-line behavior: exit codes, tables, report writing, confirmations.

Search-path tests compile tiny C programs with the host compiler so each
case runs in well under a second.
"""

import json
import shutil

import pytest

from blockoff.cli import main
from blockoff.pipeline import ConfirmMode
from blockoff.cli import confirm_interface_change

from conftest import DB_ROOT, PROFILES, basic_record, write_record

cc_available = shutil.which("cc") is not None
needs_cc = pytest.mark.skipif(not cc_available, reason="no host C compiler")


TINY_APP = """\
#include <stdio.h>

void slow_op(double *x)
{
    x[0] = x[0] + 1.0;
}

int main(void)
{
    double buf[4];
    buf[0] = 41.0;
    slow_op(buf);
    printf("checksum=%.6f\\n", buf[0]);
    return 0;
}
"""

FAST_HEADER = """\
#ifndef FAST_H
#define FAST_H
static void fast_op(double *x) { x[0] = x[0] + 1.0; }
#endif
"""


@pytest.fixture
def tiny_tree(tmp_path):
    src = tmp_path / "src"
    src.mkdir()
    (src / "tiny_app.c").write_text(TINY_APP)
    (src / "fast.h").write_text(FAST_HEADER)
    db = tmp_path / "db"
    write_record(db, basic_record(
        record_id="fast_add", callees=("slow_op",),
        snippet="fast_op({{arg0}});", includes=("fast.h",)))
    profiles = tmp_path / "profiles.json"
    profiles.write_text(json.dumps({
        "cpu_baseline": {
            "compile_cmd": ["cc", "-O2", "{{src}}", "-o", "{{out}}",
                            "{{flags}}", "-lm"],
            "run_cmd": ["{{bin}}"], "env": {}, "timeout_s": 30},
        "accel_cpu_standin": {
            "compile_cmd": ["cc", "-O2", "{{src}}", "-o", "{{out}}",
                            "{{flags}}", "-lm"],
            "run_cmd": ["{{bin}}"], "env": {}, "timeout_s": 30},
    }))
    return src, db, profiles


def test_detect_fixture_row(capsys):
    code = main([
        "detect", str(DB_ROOT.parent / "apps" / "fft_app.c"),
        "--db", str(DB_ROOT)])
    out = capsys.readouterr().out
    assert code == 0
    rows = [l for l in out.splitlines() if "\t" in l][1:]
    assert len(rows) == 1
    index, site, record, origin, score, binding = rows[0].split("\t")
    assert (index, record, origin, score) == ("0", "fft2d", "name", "-")
    assert site.endswith("fft_app.c:32")
    assert binding == "AUTO_BIND"


def test_detect_without_matches_exits_3(tmp_path, capsys):
    src = tmp_path / "plain.c"
    src.write_text("int main(void) { return 0; }\n")
    code = main(["detect", str(src), "--db", str(DB_ROOT)])
    assert code == 3
    assert "no candidates" in capsys.readouterr().out


def test_malformed_db_exits_1(tmp_path, capsys):
    record = basic_record()
    del record["replacement"]
    write_record(tmp_path / "db", record)
    src = tmp_path / "plain.c"
    src.write_text("int main(void) { return 0; }\n")
    code = main(["detect", str(src), "--db", str(tmp_path / "db")])
    assert code == 1
    assert "replacement" in capsys.readouterr().err


def test_unparseable_source_exits_1(tmp_path, capsys):
    src = tmp_path / "broken.c"
    src.write_text("int main(void) { return 0;\n")
    code = main(["detect", str(src), "--db", str(DB_ROOT)])
    assert code == 1
    assert "unclosed" in capsys.readouterr().err


def test_bad_sigma_exits_1(tmp_path):
    src = tmp_path / "plain.c"
    src.write_text("int main(void) { return 0; }\n")
    assert main(["detect", str(src), "--db", str(DB_ROOT),
                 "--sigma", "1.5"]) == 1


@needs_cc
def test_search_tiny_app_selects_replacement(tiny_tree, tmp_path, capsys):
    src, db, profiles = tiny_tree
    out_dir = tmp_path / "out"
    code = main([
        "search", str(src / "tiny_app.c"), "--db", str(db),
        "--profiles", str(profiles), "--reps", "1",
        "--out", str(out_dir)])
    assert code == 0
    report = json.loads((out_dir / "report.json").read_text())
    assert report["selected"] in ("0", "1")
    assert report["baseline"]["status"] == "ok"
    stdout = capsys.readouterr().out
    assert "speedup vs. all-CPU" in stdout
    # variant tree: baseline plus one single
    assert (out_dir / "0" / "tiny_app.c").exists()
    assert (out_dir / "1" / "tiny_app.c").exists()
    assert "fast_op(buf);" in (out_dir / "1" / "tiny_app.c").read_text()


@needs_cc
def test_search_no_candidates_writes_report_and_exits_3(
        tiny_tree, tmp_path, capsys):
    src, db, profiles = tiny_tree
    plain = src / "noop.c"
    plain.write_text(
        '#include <stdio.h>\nint main(void) { printf("ok\\n"); return 0; }\n')
    out_dir = tmp_path / "out"
    code = main([
        "search", str(plain), "--db", str(db),
        "--profiles", str(profiles), "--reps", "1", "--out", str(out_dir)])
    assert code == 3
    report = json.loads((out_dir / "report.json").read_text())
    assert report["candidates"] == []
    assert report["selected"] == ""
    assert report["speedup"] == 1.0


@needs_cc
def test_search_broken_baseline_exits_2(tiny_tree, tmp_path, capsys):
    src, db, profiles = tiny_tree
    bad = src / "bad_app.c"
    bad.write_text(
        "void slow_op(double *x);\n"
        "int main(void) { double b[1]; slow_op(b); return undeclared_fn(); }\n")
    out_dir = tmp_path / "out"
    code = main([
        "search", str(bad), "--db", str(db),
        "--profiles", str(profiles), "--reps", "1", "--out", str(out_dir)])
    assert code == 2
    assert not (out_dir / "report.json").exists()


@needs_cc
def test_assume_no_declines_and_keeps_baseline(tmp_path, capsys):
    src = tmp_path / "src"
    src.mkdir()
    (src / "app.c").write_text(TINY_APP)
    (src / "fast.h").write_text(FAST_HEADER)
    db = tmp_path / "db"
    # replacement requires two args; the call passes one -> confirmation
    write_record(db, basic_record(
        record_id="fast_add", callees=("slow_op",),
        snippet="fast_op({{arg0}});", includes=("fast.h",),
        params=[{"name": "x", "type": "f64_array", "optional": False},
                {"name": "n", "type": "i32", "optional": False}]))
    profiles = tmp_path / "profiles.json"
    profiles.write_text(json.dumps({
        "cpu_baseline": {
            "compile_cmd": ["cc", "-O2", "{{src}}", "-o", "{{out}}",
                            "{{flags}}", "-lm"],
            "run_cmd": ["{{bin}}"], "env": {}, "timeout_s": 30},
        "accel_cpu_standin": {
            "compile_cmd": ["cc", "-O2", "{{src}}", "-o", "{{out}}",
                            "{{flags}}", "-lm"],
            "run_cmd": ["{{bin}}"], "env": {}, "timeout_s": 30},
    }))
    out_dir = tmp_path / "out"
    code = main([
        "search", str(src / "app.c"), "--db", str(db),
        "--profiles", str(profiles), "--reps", "1", "--out", str(out_dir),
        "--assume-no"])
    assert code == 0
    report = json.loads((out_dir / "report.json").read_text())
    assert report["selected"] == "0"
    assert report["confirmations"] == [{"index": 0, "approved": False}]
    assert report["excluded"] == {"0": "interface change declined"}


@needs_cc
def test_search_across_multiple_source_files(tiny_tree, tmp_path, capsys):
    src, db, profiles = tiny_tree
    # split the app: main in one file, the naive routine in another
    (src / "tiny_app.c").write_text(
        '#include <stdio.h>\n'
        'void slow_op(double *x);\n'
        'int main(void)\n'
        '{\n'
        '    double buf[4];\n'
        '    buf[0] = 41.0;\n'
        '    slow_op(buf);\n'
        '    printf("checksum=%.6f\\n", buf[0]);\n'
        '    return 0;\n'
        '}\n')
    helper = src / "tiny_lib.c"
    helper.write_text(
        "void slow_op(double *x)\n{\n    x[0] = x[0] + 1.0;\n}\n")
    out_dir = tmp_path / "out"
    code = main([
        "search", str(src / "tiny_app.c"), str(helper),
        "--db", str(db), "--profiles", str(profiles),
        "--reps", "1", "--out", str(out_dir)])
    assert code == 0
    report = json.loads((out_dir / "report.json").read_text())
    assert len(report["candidates"]) == 1
    assert report["baseline"]["status"] == "ok"
    # the edited unit carries the splice; the untouched one is copied verbatim
    assert "fast_op(buf);" in (out_dir / "1" / "tiny_app.c").read_text()
    assert (out_dir / "1" / "tiny_lib.c").read_text() == helper.read_text()


def test_confirm_modes(monkeypatch, capsys):
    assert confirm_interface_change(("note",), ConfirmMode.ASSUME_YES) is True
    assert confirm_interface_change(("note",), ConfirmMode.ASSUME_NO) is False
    # non-tty interactive falls back to "no" with a warning
    import sys

    monkeypatch.setattr(sys.stdin, "isatty", lambda: False, raising=False)
    assert confirm_interface_change(("note",), ConfirmMode.INTERACTIVE) is False
    assert "not a terminal" in capsys.readouterr().err


def test_interactive_yes_via_prompt(monkeypatch, capsys):
    import sys

    monkeypatch.setattr(sys.stdin, "isatty", lambda: True, raising=False)
    monkeypatch.setattr("builtins.input", lambda _: "y")
    assert confirm_interface_change(("note",), ConfirmMode.INTERACTIVE) is True
