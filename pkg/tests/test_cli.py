import json
import subprocess
import sys
from pathlib import Path

import pytest

import scopeshield.cli as cli
from scopeshield.equivalence import TestCase, save_cases


def project(root, files):
    root.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (root / name).write_text(text, encoding="utf-8")


def test_usage_error_exits_64():
    proc = subprocess.run(
        [sys.executable, "-m", "scopeshield", "obfuscate", "--bogus-flag"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 64


def test_missing_subcommand_exits_64():
    proc = subprocess.run(
        [sys.executable, "-m", "scopeshield"], capture_output=True, text=True
    )
    assert proc.returncode == 64


def test_obfuscate_roundtrip(tmp_path, capsys):
    project(tmp_path / "src", {"a.js": "var value = 1;\nconsole.log(value);"})
    rc = cli.main(
        [
            "obfuscate",
            "--in", str(tmp_path / "src"),
            "--out", str(tmp_path / "dist"),
            "--threads", "1",
        ]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert "run report:" in out
    report_path = Path(out.split("run report:")[1].strip())
    report = json.loads(report_path.read_text())
    assert report["files_transformed"] == 1


def test_obfuscate_exit_2_on_file_error(tmp_path):
    project(tmp_path / "src", {"bad.js": "var = ;"})
    rc = cli.main(
        ["obfuscate", "--in", str(tmp_path / "src"), "--out", str(tmp_path / "dist"), "--threads", "1"]
    )
    assert rc == 2


def test_obfuscate_exit_3_on_fatal(tmp_path):
    rc = cli.main(
        ["obfuscate", "--in", str(tmp_path / "missing"), "--out", str(tmp_path / "dist")]
    )
    assert rc == 3


def test_flag_overrides_win_over_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"workers": 2, "encode_strings": True}))
    project(tmp_path / "src", {"a.js": 'var s = "text-here"; console.log(s);'})
    rc = cli.main(
        [
            "obfuscate",
            "--config", str(cfg),
            "--in", str(tmp_path / "src"),
            "--out", str(tmp_path / "dist"),
            "--threads", "1",
            "--no-strings",
        ]
    )
    assert rc == 0
    report = json.loads((tmp_path / "dist.report.json").read_text())
    assert report["config"]["workers"] == 1  # flag beat the config file
    assert report["config"]["encode_strings"] is False
    assert '"text-here"' in (tmp_path / "dist" / "a.js").read_text()


def test_threads_env_default(tmp_path, monkeypatch):
    monkeypatch.setenv("SCOPESHIELD_THREADS", "3")
    assert cli._default_threads() == 3
    monkeypatch.setenv("SCOPESHIELD_THREADS", "junk")
    assert cli._default_threads() >= 1


def test_verify_subcommand(tmp_path, node, capsys):
    project(tmp_path / "src", {"m.js": "console.log(2 + 3);"})
    assert cli.main(
        ["obfuscate", "--in", str(tmp_path / "src"), "--out", str(tmp_path / "obf"), "--threads", "1"]
    ) == 0
    save_cases([TestCase(entry="m.js")], tmp_path / "cases.json")
    rc = cli.main(
        [
            "verify",
            "--orig", str(tmp_path / "src"),
            "--obf", str(tmp_path / "obf"),
            "--cases", str(tmp_path / "cases.json"),
            "--engine", "node {file}",
            "--threads", "1",
        ]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert "equivalence rate: 100.0%" in out
    assert (tmp_path / "obf.verdicts.jsonl").is_file()


def test_verify_engine_not_found(tmp_path):
    project(tmp_path / "src", {"m.js": "1;"})
    project(tmp_path / "obf", {"m.js": "1;"})
    save_cases([TestCase(entry="m.js")], tmp_path / "cases.json")
    rc = cli.main(
        [
            "verify",
            "--orig", str(tmp_path / "src"),
            "--obf", str(tmp_path / "obf"),
            "--cases", str(tmp_path / "cases.json"),
            "--engine", "no-such-engine {file}",
        ]
    )
    assert rc == 3


def test_metrics_subcommand(tmp_path, capsys):
    project(tmp_path / "src", {"a.js": "var alpha = 1;"})
    project(tmp_path / "obf", {"a.js": "var a=1;"})
    rc = cli.main(["metrics", "--orig", str(tmp_path / "src"), "--obf", str(tmp_path / "obf")])
    assert rc == 0
    out = capsys.readouterr().out
    assert "inflation" in out and "TOTAL" in out
    data = json.loads((tmp_path / "obf.metrics.json").read_text())
    assert data["aggregate"]["files"] == 1


def test_bench_subcommand(tmp_path, capsys):
    rc = cli.main(
        ["bench", "--out", str(tmp_path / "bench"), "--total-mb", "0.15", "--worker-counts", "1,2"]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert "workers" in out and "speedup" in out
    assert (tmp_path / "bench" / "scaling.json").is_file()
    data = json.loads((tmp_path / "bench" / "scaling.json").read_text())
    assert [row["workers"] for row in data] == [1, 2]


def test_analyze_subcommand(tmp_path, capsys):
    project(
        tmp_path / "src",
        {
            "a.js": 'import {f} from "./b.js"; console.log(f());',
            "b.js": "export function f(){ return 1; }",
        },
    )
    rc = cli.main(["analyze", "--in", str(tmp_path / "src"), "--dump-scopes", "--threads", "2"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "module#0" in out
    assert "a.js -> b.js: f" in out
    assert "boundary markers: 1" in out
    assert "cut weight:" in out
