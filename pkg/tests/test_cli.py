import csv
import json
import subprocess
import sys

import pytest

from cubecolor.cli import main, parse_d_range
from cubecolor.config import Config, load_config, parse_config

# one representative invocation per subcommand (and per bounds lemma)
INVOCATIONS = [
    ["count", "--d", "3", "--q", "4"],
    ["count", "--d", "4", "--q", "4", "--workers", "2"],
    ["isets", "--d", "4"],
    ["phases", "--coloring", "43313214"],
    ["phases", "--d", "3"],
    ["template", "--d", "3", "--id", "5"],
    ["audit-entropy", "--d", "2"],
    ["audit-entropy", "--d", "3", "--ensemble", "template", "--id", "1"],
    ["bounds", "--lemma", "compositions", "--m", "12"],
    ["bounds", "--lemma", "compositions-bounded", "--m", "20"],
    ["bounds", "--lemma", "connected", "--d", "4", "--n", "4"],
    ["bounds", "--lemma", "rooted", "--d", "4", "--x", "3", "--b", "2"],
    ["bounds", "--lemma", "isoperimetry", "--d", "3"],
    ["bounds", "--lemma", "sapozhenko", "--d", "3"],
    ["bounds", "--lemma", "main-lemma", "--d", "8", "--g", "8"],
    ["bounds", "--lemma", "ideal-bound", "--d-range", "1..6"],
    ["bounds", "--lemma", "eg", "--q", "6", "--d-range", "1..5"],
    ["census-fstar", "--d", "3"],
    ["report", "--d", "1..3", "--q", "4"],
]


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_count_brute_prints_84(capsys):
    code, out, _ = run(["count", "--d", "2", "--q", "4", "--method", "brute"], capsys)
    assert code == 0 and out.strip() == "84"


def test_too_large_exit_code(capsys):
    code, _, err = run(["count", "--d", "9", "--q", "4"], capsys)
    assert code == 3 and "instance too large" in err


@pytest.mark.parametrize("argv", [
    ["count", "--d", "0"],
    ["phases", "--coloring", "1111"],
    ["phases"],
    ["template", "--d", "3", "--id", "999"],
    ["audit-entropy", "--d", "3", "--ensemble", "template", "--id", "999"],
    ["bounds", "--lemma", "compositions-bounded", "--m", "1"],
])
def test_invalid_parameters_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and "usage:" in err


@pytest.mark.parametrize("argv", [["frobnicate"], [], ["count"], ["count", "--d", "x"]])
def test_usage_errors_from_argparse(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
    assert "usage:" in capsys.readouterr().err


def test_audit_failure_exit_4(capsys):
    # a negative tolerance makes the tight uniform decomposition fail
    code, _, err = run(["audit-entropy", "--d", "2", "--entropy-tol=-1e-6"], capsys)
    assert code == 4 and "audit" in err


def test_report_csv(tmp_path, capsys):
    out = tmp_path / "report.csv"
    assert main(["report", "--d", "1..3", "--q", "4", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert [r["exact"] for r in rows] == ["12", "84", "2652"]
    assert {"theorem", "eg_conjecture", "exact/theorem", "ideal_census"} <= set(rows[0])


def test_bounds_csv_columns(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["bounds", "--lemma", "connected", "--d", "3", "--n", "3", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert {"d", "params", "count", "bound", "constant"} <= set(rows[0])
    assert len(rows) == 6


def test_json_payloads(tmp_path):
    out = tmp_path / "c.json"
    main(["count", "--d", "3", "--out", str(out)])
    doc = json.loads(out.read_text())
    assert doc["value"] == "2652" and doc["method"] == "bruteforce"
    assert "elapsed_ms" in doc and "generated_at" in doc
    main(["count", "--d", "3", "--out", str(out), "--no-timestamp"])
    doc = json.loads(out.read_text())
    assert "elapsed_ms" not in doc and "generated_at" not in doc

    out = tmp_path / "p.json"
    main(["phases", "--coloring", "43313214", "--out", str(out)])
    doc = json.loads(out.read_text())
    assert doc["phase"] == "12|34" and doc["flaws"] == [0] and doc["ideal"] is True

    out = tmp_path / "t.json"
    assert main(["template", "--d", "3", "--id", "0", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["coloring"] == "12314324" and doc["template"]["A_hat"] == [5]
    assert set(doc["ledger"]) == {"template", "coloring"}

    out = tmp_path / "a.json"
    assert main(["audit-entropy", "--d", "2", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["audit"]["H(f)"]["holds"] and doc["Shearer"]["holds"] and doc["passed"]


def test_outdir_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("CUBECOLOR_OUTDIR", str(tmp_path / "reports"))
    assert main(["census-fstar", "--d", "3"]) == 0
    doc = json.loads((tmp_path / "reports" / "census-fstar.json").read_text())
    assert doc["size"] == 72 and len(doc["members"]) == 72


def test_no_output_without_target(tmp_path, monkeypatch, capsys):
    monkeypatch.delenv("CUBECOLOR_OUTDIR", raising=False)
    monkeypatch.chdir(tmp_path)
    assert main(["isets", "--d", "2"]) == 0
    assert list(tmp_path.iterdir()) == []


@pytest.mark.parametrize("argv", INVOCATIONS, ids=lambda a: "-".join(a[:3]))
def test_reports_are_byte_identical(argv, tmp_path, capsys):
    for suffix in ("json", "csv") if argv[0] in ("report", "bounds") else ("json",):
        a, b = tmp_path / ("a." + suffix), tmp_path / ("b." + suffix)
        assert main(argv + ["--no-timestamp", "--out", str(a)]) == 0
        assert main(argv + ["--no-timestamp", "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()


class TestConfig:
    def test_parse(self):
        cfg = parse_config("""
            # comment
            threshold_base = 1.5
            cutoff = 3   # inline
            zeta=0.25
            workers = 4
        """)
        assert cfg == {"threshold_base": 1.5, "cutoff": 3.0, "zeta": 0.25, "workers": 4}
        assert parse_config("cutoff = none") == {"cutoff": None}

    @pytest.mark.parametrize("text", ["nonsense", "colour = 3", "workers = many"])
    def test_errors(self, text):
        with pytest.raises(ValueError):
            parse_config(text)

    def test_defaults_and_overrides(self, tmp_path):
        assert load_config(None) == Config()
        p = tmp_path / "run.cfg"
        p.write_text("threshold_base = 1.0\nc = 3\n")
        cfg = load_config(p).update(c=None, zeta=2.0)
        assert cfg.threshold_base == 1.0 and cfg.c == 3.0 and cfg.zeta == 2.0
        assert cfg.threshold(3) == 1.0
        assert cfg.constants.c == 3.0

    def test_file_and_flag_precedence(self, tmp_path, capsys):
        p = tmp_path / "run.cfg"
        p.write_text("threshold_base = 1.0\n")
        # base 1 leaves no coloring with flaws a main phase
        code, out, _ = run(["phases", "--coloring", "43313214", "--config", str(p)], capsys)
        assert code == 0 and "phase=None" in out
        code, out, _ = run(["phases", "--coloring", "43313214", "--config", str(p),
                            "--threshold-base", "1.9"], capsys)
        assert "phase=12|34" in out

    def test_bad_config_file_exit_2(self, tmp_path, capsys):
        p = tmp_path / "bad.cfg"
        p.write_text("speed = 11\n")
        code, _, err = run(["count", "--d", "2", "--config", str(p)], capsys)
        assert code == 2 and "unknown key" in err


def test_parse_d_range():
    assert parse_d_range("1..4") == [1, 2, 3, 4]
    assert parse_d_range("2,5") == [2, 5]


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "cubecolor", "count", "--d", "2", "--q", "3"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "18"
