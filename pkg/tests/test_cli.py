"""Front end, driven in process through main(argv)."""

import io
import json

import pytest

from tccs.cli import main

PROGRAM = """\
// two peers over one channel
D(a) = a.D(a);
P = a.0 + b.0;
Q = a.0;
W = (a.0 + b.0) | 'a.0;
B = a.0 + b.0 + 'a.0;
Z = 0;
O = Omega;
"""


@pytest.fixture
def prog(tmp_path):
    f = tmp_path / "peers.tccs"
    f.write_text(PROGRAM, encoding="ascii")
    return str(f)


def test_parse_echoes_the_whole_program(prog, capsys):
    assert main(["parse", prog]) == 0
    text = capsys.readouterr().out
    assert "D(a) = a.D(a);" in text
    assert "P = a.0 + b.0;" in text


def test_parse_single_process_and_json(prog, capsys):
    assert main(["parse", prog, "-p", "W"]) == 0
    assert capsys.readouterr().out.strip() == "a.0 + b.0 | 'a.0"
    assert main(["parse", prog, "-p", "W", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out) == {
        "process": "a.0 + b.0 | 'a.0"
    }


def test_parse_reads_stdin(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO("P = tick.a.0;\n"))
    assert main(["parse", "-", "-p", "P"]) == 0
    assert capsys.readouterr().out.strip() == "{0} else a.0"


def test_parse_error_is_exit_two(tmp_path, capsys):
    f = tmp_path / "bad.tccs"
    f.write_text("P = a..0;\n", encoding="ascii")
    assert main(["parse", str(f)]) == 2
    err = capsys.readouterr().err
    assert "parse error:" in err and "line 1, column 7" in err


def test_unknown_process_name_lists_the_known_ones(prog, capsys):
    assert main(["analyze", prog, "-p", "NOPE"]) == 2
    err = capsys.readouterr().err
    assert "no process named NOPE" in err
    assert "file defines:" in err


def test_missing_file_is_exit_two(capsys):
    assert main(["parse", "/no/such/file.tccs"]) == 2
    assert "error:" in capsys.readouterr().err


def test_lts_text_json_dot(prog, capsys):
    assert main(["lts", prog, "-p", "Q"]) == 0
    text = capsys.readouterr().out
    assert text.startswith("states: 2")
    assert "0 -a-> 1" in text

    assert main(["lts", prog, "-p", "Q", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) == {"states", "edges", "roots", "truncated"}
    assert [0, "a", 1] in doc["edges"]

    assert main(["lts", prog, "-p", "Q", "--format", "dot"]) == 0
    assert "digraph" in capsys.readouterr().out


def test_lts_bound_is_exit_three(prog, capsys):
    assert main(["lts", prog, "-p", "O", "--bound", "1"]) == 3
    assert "(truncated)" in capsys.readouterr().out


def test_analyze_text_line(prog, capsys):
    assert main(["analyze", prog, "-p", "Q"]) == 0
    line = capsys.readouterr().out.strip()
    assert line == (
        "stable=true converge=true ctxconv=true diverge=false "
        "reactive=true barbs={a}"
    )


def test_analyze_json(prog, capsys):
    assert main(["analyze", prog, "-p", "W", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["stable"] is False
    assert doc["converge"] is True
    assert doc["barbs"] == []

    assert main(["analyze", prog, "-p", "B", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["barbs"] == ["a", "b", "'a"]


def test_analyze_bound_is_exit_three(prog, capsys):
    assert main(["analyze", prog, "-p", "O", "--bound", "1"]) == 3
    assert "state bound 1 exceeded" in capsys.readouterr().err


def test_check_related_is_exit_zero(prog, capsys):
    assert main(["check", prog, "-p", "Z", "-q", "Z"]) == 0
    assert capsys.readouterr().out.strip() == "related"


def test_check_unrelated_explains(prog, capsys):
    assert main(["check", prog, "-p", "Z", "-q", "O", "--rel", "conv"]) == 1
    out = capsys.readouterr().out
    assert out.startswith("not related")
    assert "[red-tick]" in out


def test_check_json_verdict(prog, capsys):
    code = main([
        "check", prog, "-p", "P", "-q", "Q", "--rel", "usual",
        "--format", "json",
    ])
    assert code == 1
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) == {
        "related", "mode", "roots", "rounds", "certificate", "tester"
    }
    assert doc["related"] is False and doc["mode"] == "usual"
    assert all(
        set(e) == {"pair", "clause", "challenge", "round"}
        for e in doc["certificate"]
    )


def test_check_falsify_reports_a_context(prog, capsys):
    code = main([
        "check", prog, "-p", "Z", "-q", "O", "--falsify", "--depth", "0",
    ])
    assert code == 1
    out = capsys.readouterr().out
    assert "context: [] ;" in out and "may-converge" in out


def test_check_rejects_untimed_mode_on_timed_terms(tmp_path, capsys):
    f = tmp_path / "timed.tccs"
    f.write_text("P = {a.0} else b.0;\nQ = a.0;\n", encoding="ascii")
    code = main([
        "check", str(f), "-p", "P", "-q", "Q", "--rel", "usual-untimed",
    ])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_check_bad_mode_is_an_argparse_error(prog, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["check", prog, "-p", "Z", "-q", "Z", "--rel", "strong"])
    assert exc.value.code == 2


def test_step_walks_one_action(prog, monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO("0\nq\n"))
    assert main(["step", prog, "-p", "Q"]) == 0
    out = capsys.readouterr().out
    assert "instant 1: a.0" in out
    assert "0) a -> 0" in out
    assert "instant 1: 0" in out


def test_step_tick_advances_the_instant(prog, monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO("1\nq\n"))
    assert main(["step", prog, "-p", "Q"]) == 0
    out = capsys.readouterr().out
    assert "1) tick -> a.0" in out
    assert "instant 2: a.0" in out


def test_step_rejects_garbage_and_survives_eof(prog, monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO("x\n9\n"))
    assert main(["step", prog, "-p", "Q"]) == 0
    out = capsys.readouterr().out
    assert out.count("pick a transition index, or q to quit") == 2


def test_paper_suite_runs_clean(capsys):
    assert main(["paper-suite"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert all(line.startswith("pass ") for line in out[:-1])
    assert out[-1].endswith("items pass")
    total = int(out[-1].split()[0])
    assert total == len(out) - 1
