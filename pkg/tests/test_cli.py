from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from isounit.cli import main
from worked_examples import SAMPLES

LEXICON = str(SAMPLES / "paper.tsv")
SENTENCES = str(SAMPLES / "paper_sentences.txt")


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_translate_sample_sentences(capsys):
    code, out, err = run(["translate", "--lexicon", LEXICON, "--in", SENTENCES], capsys)
    lines = out.splitlines()
    assert code == 0
    assert len(lines) == 7
    assert "즉 I_3" in lines[1]
    assert err == ""


def test_translate_empty_stdin(capsys, monkeypatch):
    code, out, _ = run(["translate", "--lexicon", LEXICON], capsys, "", monkeypatch)
    assert code == 0 and out == ""


def test_translate_unbalanced_names_sentence(capsys, monkeypatch):
    code, out, err = run(["translate", "--lexicon", LEXICON, "--in", "-"], capsys,
                         "The law is known. The (current is small.", monkeypatch)
    assert code == 2
    assert "sentence 2" in err
    assert out.splitlines()[1] == ""


def test_translate_trace_to_stderr(capsys):
    code, out, err = run(["translate", "--lexicon", LEXICON, "--in", SENTENCES, "--trace"], capsys)
    records = [json.loads(line) for line in err.splitlines()]
    assert code == 0 and len(records) == 7
    assert records[1]["matches"][0]["rule"] == "N-2"
    assert [r["output"] for r in records] == out.splitlines()


def test_translate_trace_out(capsys, tmp_path):
    trace = tmp_path / "t.jsonl"
    code, _, err = run(["translate", "--lexicon", LEXICON, "--in", SENTENCES,
                        "--trace-out", str(trace)], capsys)
    assert code == 0 and err == ""
    assert len(trace.read_text(encoding="utf-8").splitlines()) == 7


def test_translate_missing_input(capsys, tmp_path):
    code, _, err = run(["translate", "--lexicon", LEXICON, "--in", str(tmp_path / "nope")], capsys)
    assert code == 2 and "cannot read" in err


def test_translate_requires_lexicon(capsys):
    with pytest.raises(SystemExit) as info:
        main(["translate"])
    assert info.value.code == 2


def test_validate_builtin(capsys):
    code, out, _ = run(["validate", "--builtin"], capsys)
    assert code == 0 and out.strip() == "10 rules OK"


def test_validate_needs_a_source(capsys):
    code, _, err = run(["validate"], capsys)
    assert code == 2 and "validate" in err


def test_validate_unbound_capture(capsys, tmp_path):
    bad = tmp_path / "bad.rules"
    bad.write_text('rule Bad-7 nominal { pattern: ... N:a , <Ih-N> N <It> ; '
                   'korean: +<< $x >> ; anchor: a ; }\n', encoding="utf-8")
    code, _, err = run(["validate", "--rules", str(bad)], capsys)
    assert code == 1 and "Bad-7" in err and "$x" in err


def test_validate_bad_lexicon(capsys, tmp_path):
    bad = tmp_path / "bad.tsv"
    bad.write_text("wife\tN1\t안해\nfoo\tQQ\tx\n", encoding="utf-8")
    code, _, err = run(["validate", "--lexicon", str(bad)], capsys)
    assert code == 1 and "line 2" in err


def test_validate_good_lexicon(capsys):
    code, out, _ = run(["validate", "--lexicon", LEXICON], capsys)
    assert code == 0 and "lexicon entries OK" in out


def test_match_table(capsys):
    code, out, _ = run(["match", "N-2", "The solution of Eqs.(1-42) for any current, say I_3, "
                        "using determinants is found."], capsys)
    rows = {line.split("\t")[0]: line.split("\t")[2] for line in out.splitlines()}
    assert code == 0 and rows["x"] == "I_3" and rows["a"] == "current"


def test_match_no_match(capsys):
    code, out, _ = run(["match", "N-1", "Hello world."], capsys)
    assert code == 0 and out.startswith("no match")


def test_match_no_match_reports_position(capsys):
    code, out, _ = run(["match", "N-1", "It is, if not explicitly indicated, true."], capsys)
    assert code == 0 and "furthest pattern position" in out


def test_match_unknown_rule(capsys):
    code, _, err = run(["match", "Z-9", "x"], capsys)
    assert code == 1 and "N-1" in err and "Ad-2" in err


def test_catalog_round_trips(capsys, tmp_path):
    code, out, _ = run(["catalog"], capsys)
    assert code == 0
    path = tmp_path / "cat.rules"
    path.write_text(out, encoding="utf-8")
    code, out, _ = run(["validate", "--rules", str(path)], capsys)
    assert code == 0 and out.strip() == "10 rules OK"


def test_custom_rules_file_used_for_translate(capsys, tmp_path):
    path = tmp_path / "one.rules"
    path.write_text('rule Only nominal { pattern: ... N:a , <Ih-N> "say" L:x <It> , ... ; '
                    'korean: +<< "다시말하여" $x >> ; anchor: a ; }\n', encoding="utf-8")
    code, out, _ = run(["translate", "--lexicon", LEXICON, "--rules", str(path), "--in", SENTENCES],
                       capsys)
    assert code == 0 and "전류 다시말하여 I_3" in out.splitlines()[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "isounit", "validate", "--builtin"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "10 rules OK"


def test_bundled_lexicon_matches_sample():
    from importlib import resources
    bundled = resources.files("isounit").joinpath("data/lexicon.tsv").read_text(encoding="utf-8")
    assert bundled == (SAMPLES / "paper.tsv").read_text(encoding="utf-8")
