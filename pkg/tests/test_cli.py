import csv
import io
import json
import subprocess
import sys

import pytest

from sonine.cli import run
from sonine.reports import SCHEMA_VERSION, VerificationReport, dumps


def _json(capsys, argv, code=0):
    assert run(argv) == code
    return json.loads(capsys.readouterr().out)


def test_sigma_example(capsys):
    rec = _json(capsys, ["sigma", "--h", "0.5", "--k2", "1", "--n", "2", "--format", "json"])
    assert rec["result"]["membership"] == "Outside" and rec["schema"] == SCHEMA_VERSION


def test_kadell_example(capsys):
    rec = _json(capsys, ["kadell", "--n", "1", "--alpha", "1", "--mu", "2", "--nu", "3", "--lam", "1"])
    assert rec["rhs"]["re"] == pytest.approx(0.4) and rec["passed"] is True


def test_selberg_example(capsys):
    rec = _json(capsys, ["selberg", "--n", "2", "--kappa", "1", "--mu", "2", "--nu", "2"])
    assert rec["result"]["value"] == pytest.approx(1 / 6, rel=1e-14)


def test_verification_failure_exit_code(capsys):
    argv = ["sonine-b", "--k1", "0.5", "--k2", "1", "--h", "1.5", "--xi", "1,0.5", "--nodes", "4",
            "--tolerance", "1e-14"]
    assert run(argv) == 1
    assert json.loads(capsys.readouterr().out)["passed"] is False


def test_negative_values_are_not_options(capsys):
    rec = _json(capsys, ["sigma", "--h", "-2", "--k2", "1", "--n", "2", "--window", "-3,0"])
    assert rec["result"]["membership"] == "DiscretePart"


def test_usage_errors(capsys):
    assert run(["no-such-command"]) == 2
    assert run(["sigma", "--h", "0.5"]) == 2
    assert run(["kadell", "--n", "1", "--alpha", "1", "--mu", "2", "--nu", "3", "--lam", "x"]) == 2
    assert run(["jacobi-connect", "--a-src", "0", "--a-dst", "1", "--b", "0", "--degree", "40"]) == 2
    capsys.readouterr()


def test_domain_error_exit_code(capsys):
    # mu below the integrability bound
    assert run(["kadell", "--n", "2", "--alpha", "1", "--mu", "0.5", "--nu", "3", "--lam", "1"]) == 3
    assert "mu" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["jack", "--lam", "2,1", "--alpha", "2", "--x", "0.3,0.5,0.7"],
    ["hyp0f1", "--alpha", "1", "--mu", "2", "--z", "0.5,0.2", "--w", "1,1"],
    ["bessel-b", "--k1", "0.5", "--k2", "1", "--z", "1,0.5", "--w", "0.3,0.2"],
    ["sonine-0f1", "--alpha", "1", "--mu", "2", "--nu", "2", "--z", "-0.25,-0.5"],
    ["sonine-b", "--k1", "0.5", "--k2", "1", "--h", "1.5", "--xi", "1,0.5"],
    ["probe", "--k1", "0.5", "--k2", "1", "--h", "1.5", "--n", "2"],
    ["classify", "--k1", "0.5", "--k2", "1", "--h", "2", "--n", "2"],
    ["rank1-sonine", "--a", "0.5", "--b", "0.5", "--z", "1"],
    ["xu", "--k", "0.5", "--kp", "1", "--degree", "2", "--x", "0.5,1"],
    ["jacobi-connect", "--a-src", "0", "--a-dst", "1", "--b", "0", "--degree", "4"],
    ["ho-polys", "--k", "0.5,0,0.5", "--n", "2", "--cutoff", "3"],
    ["ho-connect", "--k", "0.5,0,0.5", "--kp", "1,0,0.5", "--n", "2", "--cutoff", "3"],
    ["sign-scan", "--k", "0,0,1", "--kp", "0.5,0,1", "--max-m", "2"],
    ["contract", "--k", "1,0", "--lam", "1", "--t", "0.5", "--m", "2,4"],
])
def test_every_subcommand_in_every_format(capsys, argv):
    rec = _json(capsys, argv + ["--no-timestamp"])
    assert rec["schema"] == SCHEMA_VERSION and "timestamp" not in rec
    assert run(argv + ["--format", "pretty"]) == 0
    assert capsys.readouterr().out.strip()
    assert run(argv + ["--format", "csv"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) >= 2


def test_report_json_reparses(capsys):
    assert run(["sonine-0f1", "--alpha", "1", "--mu", "2", "--nu", "2", "--z", "-0.25,-0.5",
                "--no-timestamp"]) == 0
    text = capsys.readouterr().out
    rep = VerificationReport.from_dict(json.loads(text))
    assert dumps(rep.to_dict(timestamp=False), indent=2) + "\n" == text


def test_byte_identical_without_timestamp(capsys):
    argv = ["kadell", "--n", "2", "--alpha", "2", "--mu", "2.5", "--nu", "2.5", "--lam", "1",
            "--method", "MonteCarloBeta", "--samples", "4096", "--seed", "5", "--no-timestamp"]
    run(argv)
    first = capsys.readouterr().out
    run(argv)
    assert capsys.readouterr().out == first


def test_timestamp_is_the_only_difference(capsys):
    argv = ["sigma", "--h", "0.5", "--k2", "1", "--n", "2"]
    a = _json(capsys, argv)
    b = _json(capsys, argv + ["--no-timestamp"])
    assert "timestamp" in a
    a.pop("timestamp")
    assert a == b


def test_output_dir_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("SONINE_OUTPUT_DIR", str(tmp_path))
    assert run(["sigma", "--h", "2", "--k2", "1", "--n", "2"]) == 0
    assert json.loads((tmp_path / "sigma.json").read_text())["result"]["membership"] == "ContinuousPart"
    assert run(["sigma", "--h", "2", "--k2", "1", "--n", "2", "--format", "csv", "--output", "s.csv"]) == 0
    assert (tmp_path / "s.csv").exists()
    assert capsys.readouterr().out == ""


def _batch(tmp_path, runs, extra=()):
    cfg = tmp_path / "runs.json"
    cfg.write_text(json.dumps({"runs": runs}))
    out = tmp_path / "agg.json"
    code = run(["batch", str(cfg), "--output", str(out), "--no-timestamp", *extra])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_batch_empty(tmp_path):
    code, agg = _batch(tmp_path, [])
    assert code == 0 and agg["total"] == 0 and agg["runs"] == []


def test_batch_two_passing(tmp_path):
    runs = [
        {"subcommand": "selberg", "params": {"n": 2, "kappa": 1, "mu": 2, "nu": 2}},
        {"subcommand": "kadell", "params": {"n": 1, "alpha": 1, "mu": 2, "nu": 3, "lam": [1]}},
    ]
    code, agg = _batch(tmp_path, runs, ("--jobs", "2"))
    assert code == 0 and (agg["passed"], agg["failed"]) == (2, 0)
    assert [r["argv"][0] for r in agg["runs"]] == ["selberg", "kadell"]


def test_batch_one_failure(tmp_path):
    runs = [
        {"subcommand": "selberg", "params": {"n": 2, "kappa": 1, "mu": 2, "nu": 2}},
        {"subcommand": "sonine-b", "params": {"k1": 0.5, "k2": 1, "h": 1.5, "xi": [1, 0.5], "nodes": 4},
         "tolerance": 1e-14},
    ]
    code, agg = _batch(tmp_path, runs)
    assert code == 1 and (agg["passed"], agg["failed"]) == (1, 1)


def test_batch_malformed(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text("{not json")
    assert run(["batch", str(cfg)]) == 2
    cfg.write_text(json.dumps({"runs": [{"params": {}}]}))
    assert run(["batch", str(cfg)]) == 2
    capsys.readouterr()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "sonine", "sigma", "--h", "-2", "--k2", "1", "--n", "2",
                           "--no-timestamp"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["membership"] == "DiscretePart"
