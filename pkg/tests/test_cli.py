import io
import json
import re
from importlib import resources

import pytest

from nlogic.cli import main
from nlogic.frames import parse_frame

FIX = resources.files("nlogic") / "fixtures"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def fixture(name):
    return str(FIX / name)


def records(text):
    return [json.loads(line) for line in text.splitlines()]


def test_check_algebra_passes():
    code, out, _ = run("check-algebra", fixture("chain3.alg"))
    assert code == 0 and out.startswith("# nlogic check-algebra  sha256:")


def test_bad_frame_fails_with_unit_witness():
    code, out, _ = run("check-frame", fixture("bad.frame"), "--class", "PU")
    assert code == 1
    assert "FAIL U" in out and "x=w" in out and "v=w" in out


def test_weakening_correspondent():
    code, out, _ = run("correspond", "--sequent", "p |- q -> p", "--class", "LK_*")
    assert code == 0
    assert "∀x0∀x1∀x2(R(x0,x1,x2) → x2≤x0)" in out


def test_correspond_trace_and_guarded():
    code, out, _ = run("correspond", "--sequent", "p |- q -> p", "--class", "LK_*",
                       "--trace", "--guarded")
    assert code == 0
    assert "R7" in out and "t-INV(P)" in out


def test_correspond_unit_in_pu():
    code, out, _ = run("correspond", "--sequent", "p |- t -> p", "--class", "PU",
                       "--mode", "cotranslate")
    assert code == 0 and "U(" in out


def test_not_sahlqvist_is_a_failure():
    code, _, _ = run("correspond", "--sequent", "(p -> q) -> q |- p", "--class", "LK_*")
    assert code == 1


def test_dualize_output_is_a_frame(tmp_path):
    code, out, _ = run("dualize", fixture("bool2.alg"))
    assert code == 0
    fr = parse_frame(out)
    assert fr.size("1") == fr.size("d") == 2


def test_dualize_sidecar(tmp_path):
    side = tmp_path / "points.txt"
    code, _, _ = run("dualize", fixture("diamond.alg"), "--sidecar", str(side))
    assert code == 0 and side.read_text().strip()


def test_eval_and_valid(tmp_path):
    val = tmp_path / "v.txt"
    val.write_text("p: x_0\n")
    frame = tmp_path / "f.frame"
    frame.write_text(run("dualize", fixture("bool2.alg"))[1])
    code, out, _ = run("eval", str(frame), "--formula", "p -> p", "--valuation", str(val))
    assert code == 0 and "x_0" in out
    assert run("valid", str(frame), "--sequent", "p |- p")[0] == 0
    assert run("valid", str(frame), "--sequent", "p |- q")[0] == 1


def test_verify_enumerate():
    code, out, _ = run("verify", "--sequent", "p * q |- q * p", "--class", "LK_*",
                       "--enumerate", "20")
    assert code == 0 and "PASS" in out


def test_verify_frames_dir(tmp_path):
    (tmp_path / "a.frame").write_text(run("dualize", fixture("bool2_lambek.alg"))[1])
    code, _, _ = run("verify", "--sequent", "p |- q -> p", "--class", "LK_*",
                     "--frames", str(tmp_path))
    assert code == 0


def test_selftest_subset():
    code, out, _ = run("selftest", "--criteria", "1,2")
    assert code == 0 and out.count("PASS criterion") == 2


@pytest.mark.parametrize("argv", [
    ("check-algebra", "/no/such/file.alg"),
    ("correspond", "--sequent", "p |-", "--class", "LK_*"),
    ("eval", fixture("bad.frame"), "--formula", "p"),
])
def test_usage_errors_exit_two(argv):
    code, out, err = run(*argv)
    assert code == 2 and err.startswith("nlogic ")


@pytest.mark.parametrize("argv", [
    ("correspond", "--sequent", "p |- p", "--class", "nonsense"),
    ("frobnicate",),
    (),
])
def test_argument_errors_exit_two(argv, capsys):
    code, _, _ = run(*argv)
    assert code == 2 and "usage:" in capsys.readouterr().err


def test_json_lines_schema():
    code, out, _ = run("check-frame", fixture("bad.frame"), "--class", "PU",
                       "--format", "json-lines")
    recs = records(out)
    assert recs[0]["type"] == "header" and recs[0]["command"] == "check-frame"
    assert recs[-1] == {"exit": 1, "status": "fail", "type": "summary"}
    body = [r for r in recs if r["type"] == "record"]
    assert {"id", "status", "witness", "detail"} <= set(body[0])
    fail = next(r for r in body if r["status"] == "fail")
    assert fail["witness"] == {"x": "w", "v": "w"}


def test_json_lines_covers_text():
    argv = ("correspond", "--sequent", "p * q |- q * p", "--class", "LK_*")
    _, text, _ = run(*argv)
    _, js, _ = run(*argv, "--format", "json-lines")
    details = [r.get("detail", "") for r in records(js)]
    for line in text.splitlines()[1:]:
        assert any(line.strip() in d or d in line for d in details if d), line


@pytest.mark.parametrize("argv", [
    ("dualize", fixture("chain3.alg")),
    ("correspond", "--sequent", "p |- p * p", "--class", "LK_*", "--format", "json-lines"),
    ("verify", "--sequent", "p |- q -> p", "--class", "LK_*", "--enumerate", "10"),
])
def test_output_is_deterministic(argv):
    assert run(*argv) == run(*argv)


def test_timing_only_on_request():
    timing = re.compile(r"^# \d+\.\d{3}s$", re.M)
    _, out, _ = run("check-algebra", fixture("chain3.alg"))
    assert not timing.search(out)
    _, out, _ = run("check-algebra", fixture("chain3.alg"), "--timing")
    assert timing.search(out)


def test_help_documents_grammars(capsys):
    assert main(["--help"]) == 0
    out = capsys.readouterr().out
    assert "sequent" in out and "'|-'" in out and "frame file" in out
