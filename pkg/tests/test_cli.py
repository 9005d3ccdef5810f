from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest

from ffperiods.cli import build_parser, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_bessel_gl2_f2(capsys):
    code, out, _ = run(capsys, "bessel", "--n", "2", "--p", "2", "--k", "1")
    assert code == 0
    rows = out.strip().splitlines()[1:]
    assert '0,1,"(2,)","(1,)",1' in rows and '0,1,"(1, 1)","(1, 1)",-1' in rows
    assert '2,2,"(1, 1)","(1, 1)",1/2' in rows


def test_group_info(capsys, tmp_path):
    out_file = tmp_path / "info.json"
    code, _, _ = run(capsys, "group-info", "--p", "2", "--out", str(out_file))
    info = json.loads(out_file.read_text())
    assert code == 0 and info["orders_match"] and info["classes"] == 15
    assert info["orders"]["X_sigma"] == 30


def test_char_table(capsys, tmp_path):
    out_file = tmp_path / "t.json"
    code, out, _ = run(capsys, "char-table", "--p", "2", "--out", str(out_file))
    payload = json.loads(out_file.read_text())
    assert code == 0 and out.startswith("# Irr(GL_2(F_4)): 15 characters")
    assert len(payload["values"]) == 15 and sum(payload["class_sizes"]) == 180


def test_verify_report_and_cache_round_trip(capsys, tmp_path):
    cache = tmp_path / "cache"
    outputs = []
    for run_no in range(2):
        csv_path, json_path = tmp_path / f"{run_no}.csv", tmp_path / f"{run_no}.json"
        code, _, _ = run(capsys, "verify", "--p", "2", "--suite", "main,reg,orbits", "--mode", "float",
                         "--cache-dir", str(cache), "--csv", str(csv_path), "--json", str(json_path))
        assert code == 0
        outputs.append((csv_path.read_bytes(), json_path.read_bytes()))
    assert outputs[0] == outputs[1]
    assert any(cache.glob("table-*.npz")) and any(cache.glob("bessel-*.npz"))
    summary = json.loads(outputs[0][1])
    assert summary["passed"] and "float" in summary["counts"]
    code, out, _ = run(capsys, "report", str(tmp_path / "0.csv"))
    assert code == 0 and out.splitlines()[0].split() == ["suite", "pass", "fail"]


def test_corrupted_cache_is_reported(capsys, tmp_path):
    cache = tmp_path / "c"
    assert run(capsys, "char-table", "--p", "2", "--cache-dir", str(cache))[0] == 0
    for f in cache.glob("table-*.npz"):
        f.write_bytes(f.read_bytes()[:-5] + b"xxxxx")
    # a fresh process so the in-memory table cache is empty
    proc = subprocess.run([sys.executable, "-m", "ffperiods", "char-table", "--p", "2",
                           "--cache-dir", str(cache)], capture_output=True, text=True)
    assert proc.returncode == 2 and "corrupted" in proc.stderr


def test_failed_report_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("suite,anchor,params,lhs,rhs,pass,micros\nx,a,{},1,2,FAIL,0\n")
    code, out, _ = run(capsys, "report", str(bad))
    assert code == 1 and "FAIL [x]" in out


def test_budget_and_argument_errors(capsys):
    assert run(capsys, "group-info", "--p", "2", "--budget", "10")[0] == 2
    with pytest.raises(SystemExit):
        main(["verify", "--suite", "nonsense"])
    args = build_parser().parse_args(["basechange", "--kappa", "tau"])
    assert args.kappa == "tau" and args.threads == 1


def test_fallback_backend_gives_identical_report(tmp_path):
    paths = {}
    for backend, env_extra in (("python", {"FFPERIODS_PURE_PYTHON": "1"}), ("default", {})):
        env = {k: v for k, v in os.environ.items() if k != "FFPERIODS_PURE_PYTHON"}
        env.update(env_extra)
        out = tmp_path / f"{backend}.csv"
        proc = subprocess.run([sys.executable, "-m", "ffperiods", "verify", "--p", "2", "--suite", "main,reg",
                               "--csv", str(out), "--json", str(tmp_path / f"{backend}.json")],
                              env=env, capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        paths[backend] = out.read_bytes()
    assert paths["python"] == paths["default"]
