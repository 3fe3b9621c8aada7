import json
import subprocess
import sys

import pytest

from conftest import GOLDEN
from lpproof.cli import (EXIT_BUDGET, EXIT_CHECK, EXIT_INTERNAL, EXIT_OK, EXIT_PARSE, EXIT_SORRY,
                         exit_status, main)

SORRY = GOLDEN / "avatar_refutation.drv"


def report_lines(out):
    return dict(line.split("=", 1) for line in out.splitlines() if "=" in line and " " not in line)


@pytest.mark.parametrize("name", ["superposition", "simultaneous", "avatar", "polymorphic",
                                  "equational"])
def test_e2e_golden_ok(name, capsys):
    assert main(["e2e", str(GOLDEN / f"{name}.drv")]) == EXIT_OK
    rep = report_lines(capsys.readouterr().out)
    assert rep["sorry_count"] == "0" and rep["exit_status"] == "0"


def test_translate_then_check(tmp_path, capsys):
    out = tmp_path / "s.dk"
    assert main(["translate", str(GOLDEN / "superposition.drv"), "--output", str(out)]) == EXIT_OK
    assert out.read_text().startswith("(; 1.")
    assert main(["check", str(out)]) == EXIT_OK
    rep = report_lines(capsys.readouterr().out)
    assert int(rep["entries_checked"]) > 20


def test_translate_is_byte_stable(tmp_path):
    a, b = tmp_path / "a.dk", tmp_path / "b.dk"
    main(["translate", str(GOLDEN / "avatar.drv"), "-o", str(a)])
    main(["translate", str(GOLDEN / "avatar.drv"), "-o", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_translate_to_stdout_keeps_report_on_stderr(capsys):
    main(["translate", str(GOLDEN / "superposition.drv")])
    cap = capsys.readouterr()
    assert cap.out.startswith("(; 1.") and "exit_status=0" in cap.err


def test_no_banner(tmp_path):
    out = tmp_path / "s.dk"
    main(["translate", str(GOLDEN / "superposition.drv"), "-o", str(out), "--no-prelude-banner"])
    assert "(;" not in out.read_text()


def test_sorry_exit_codes(capsys):
    assert main(["e2e", str(SORRY)]) == EXIT_SORRY
    cap = capsys.readouterr()
    assert "sorry" in cap.err
    assert report_lines(cap.out)["sorry_steps"] == "17"
    assert main(["e2e", str(SORRY), "--allow-sorry"]) == EXIT_OK
    assert main(["translate", str(SORRY), "-o", "/dev/null"]) == EXIT_SORRY


def test_check_failure_names_entry(tmp_path, capsys):
    out = tmp_path / "s.dk"
    main(["translate", str(GOLDEN / "superposition.drv"), "-o", str(out)])
    text = out.read_text().replace("step_1 u_d W l1", "step_1 W u_d l1")
    out.write_text(text)
    assert main(["check", str(out)]) == EXIT_CHECK
    cap = capsys.readouterr()
    assert report_lines(cap.out)["failed_entry"] == "step_3"
    assert "step_3" in cap.err


def test_budget_flag_and_env(tmp_path, monkeypatch):
    trace = str(GOLDEN / "superposition.drv")
    assert main(["e2e", trace, "--budget", "5"]) == EXIT_BUDGET
    monkeypatch.setenv("LAMPI_BUDGET", "5")
    assert main(["e2e", trace]) == EXIT_BUDGET
    assert main(["e2e", trace, "--budget", "100000"]) == EXIT_OK


def test_parse_errors(tmp_path):
    bad = tmp_path / "bad.drv"
    bad.write_text("format 1 cnf.\nstep 1 input [] {} | P(a) | .\n")
    assert main(["e2e", str(bad)]) == EXIT_PARSE
    dk = tmp_path / "bad.dk"
    dk.write_text("a : (A.")
    assert main(["check", str(dk)]) == EXIT_PARSE
    assert main(["check", str(tmp_path / "missing.dk")]) == EXIT_PARSE
    assert main(["frobnicate"]) == EXIT_PARSE


def test_corrupted_trace_exit(tmp_path, capsys):
    bad = tmp_path / "bad.drv"
    bad.write_text((GOLDEN / "superposition.drv").read_text().replace("R(f(c,d,W)) | lits", "R(d) | lits"))
    assert main(["e2e", str(bad)]) == EXIT_INTERNAL
    assert "corrupted" in capsys.readouterr().err


def test_report_json_and_emit(tmp_path):
    rep, emitted = tmp_path / "r.json", tmp_path / "e.dk"
    assert main(["e2e", str(SORRY), "--allow-sorry", "--report-json", str(rep),
                 "--emit", str(emitted)]) == EXIT_OK
    data = json.loads(rep.read_text())
    assert data["sorry_steps"] == ["17"] and data["exit_status"] == 0
    assert "sorry_17 :" in emitted.read_text()


def test_exit_table_is_total():
    seen = set()
    for parsed in (False, True):
        for translated in (False, True):
            for sorry in (0, 1):
                for allow in (False, True):
                    for checked in (None, False, True):
                        for budget_ok in (False, True):
                            seen.add(exit_status(parsed, translated, sorry, allow, checked,
                                                 budget_ok))
    assert seen == {0, 1, 2, 3, 4, 5}


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "lpproof", "e2e", str(GOLDEN / "avatar.drv")],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "exit_status=0" in res.stdout
