import json
import subprocess
import sys

import pytest

from cefr_progress.cli import main


def test_analyze_fixture_writes_three_reports(linear_repo, tmp_path, capsys):
    out = tmp_path / "out"
    code = main(["analyze", str(linear_repo), "--out", str(out), "--period", "yearly"])
    assert code == 0
    for name in ("report.json", "report.csv", "report.html"):
        assert (out / name).is_file()
    summary = capsys.readouterr().out.strip()
    assert summary.startswith("commits analyzed: 7;")
    assert "top contributor:" in summary


def test_analyze_summary_counts_skipped_files(linear_repo, tmp_path, capsys):
    code = main(["analyze", str(linear_repo), "--out", str(tmp_path / "o")])
    assert code == 0
    assert "files skipped: 1" in capsys.readouterr().out  # broken.py


def test_analyze_nonexistent_repo_exits_2(tmp_path):
    assert main(["analyze", str(tmp_path / "missing"), "--out", str(tmp_path / "o")]) == 2


def test_analyze_bad_catalog_exits_3(linear_repo, tmp_path):
    bad = tmp_path / "bad.cat"
    bad.write_text("if_statement NOPE\n")
    code = main(["analyze", str(linear_repo), "--out", str(tmp_path / "o"), "--catalog", str(bad)])
    assert code == 3


def test_analyze_unwritable_output_exits_4(linear_repo, tmp_path):
    blocker = tmp_path / "blocked"
    blocker.write_text("a file, not a directory\n")
    assert main(["analyze", str(linear_repo), "--out", str(blocker)]) == 4


def test_analyze_monthly_period(linear_repo, tmp_path):
    out = tmp_path / "out"
    assert main(["analyze", str(linear_repo), "--out", str(out), "--period", "monthly"]) == 0
    rows = (out / "report.csv").read_text().splitlines()
    assert rows[1].startswith("2014-03,")


def test_analyze_show_names(linear_repo, tmp_path):
    out = tmp_path / "out"
    assert main(["analyze", str(linear_repo), "--out", str(out), "--show-names"]) == 0
    payload = json.loads((out / "report.json").read_text())
    names = {c["name"] for c in payload["contributors"]}
    assert "Alice Dev" in names


def test_analyze_default_bot_filtering(linear_repo, tmp_path):
    out = tmp_path / "out"
    assert main(["analyze", str(linear_repo), "--out", str(out), "--show-names"]) == 0
    payload = json.loads((out / "report.json").read_text())
    assert all("[bot]" not in (c["name"] or "") for c in payload["contributors"])
    assert payload["excluded_total"][0] > 0  # the bot's assignments went to the residual


def test_analyze_custom_bot_pattern(linear_repo, tmp_path):
    out = tmp_path / "out"
    code = main([
        "analyze", str(linear_repo), "--out", str(out), "--show-names",
        "--bot-pattern", "^Bob",
    ])
    assert code == 0
    payload = json.loads((out / "report.json").read_text())
    names = {c["name"] for c in payload["contributors"]}
    assert "Bob Coder" not in names
    assert "release[bot]" in names  # custom patterns replace the default


def test_analyze_identity_committer_mode(linear_repo, tmp_path):
    assert main(["analyze", str(linear_repo), "--out", str(tmp_path / "o"), "--identity", "committer"]) == 0


def test_analyze_jobs_flag(linear_repo, tmp_path):
    assert main(["analyze", str(linear_repo), "--out", str(tmp_path / "o"), "--jobs", "2"]) == 0


def test_analyze_rejects_bad_jobs(linear_repo, tmp_path):
    with pytest.raises(SystemExit):
        main(["analyze", str(linear_repo), "--out", str(tmp_path / "o"), "--jobs", "0"])


def test_classify_metaclass_file(tmp_path, capsys):
    target = tmp_path / "meta.py"
    target.write_text("class Special(Base, metaclass=Meta):\n    pass\n")
    assert main(["classify", str(target)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["levels"]["C2"] >= 1
    assert {"kind": "metaclass", "line": 1} in payload["occurrences"]


def test_classify_empty_file(tmp_path, capsys):
    target = tmp_path / "empty.py"
    target.write_text("")
    assert main(["classify", str(target)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert list(payload["levels"].values()) == [0, 0, 0, 0, 0, 0]
    assert payload["total"] == 0


def test_classify_broken_file_exits_5(tmp_path):
    target = tmp_path / "broken.py"
    target.write_text("def broken(:\n")
    assert main(["classify", str(target)]) == 5


def test_classify_unreadable_file_exits_4(tmp_path):
    assert main(["classify", str(tmp_path / "missing.py")]) == 4


def test_classify_with_catalog_override(tmp_path, capsys):
    target = tmp_path / "simple.py"
    target.write_text("x = 1\n")
    rules = tmp_path / "rules.cat"
    rules.write_text("simple_assignment C2 promoted for testing\n")
    assert main(["classify", str(target), "--catalog", str(rules)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["levels"]["C2"] == 1
    assert payload["levels"]["A1"] == 0


def test_module_entry_point_smoke(linear_repo, tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "cefr_progress", "analyze", str(linear_repo), "--out", str(tmp_path / "o")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.startswith("commits analyzed:")
    # progress stays on stderr, machine output on stdout
    assert "INFO" not in proc.stdout
